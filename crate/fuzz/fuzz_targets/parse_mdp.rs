#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // a parsed instance must survive a format round trip unchanged
    if let Ok(mdp) = cmabmt::rl::parse_mdp(text) {
        let again = cmabmt::rl::parse_mdp(&cmabmt::rl::format_mdp(&mdp)).expect("formatted MDP reparses");
        assert_eq!(mdp.transitions(), again.transitions());
        assert_eq!(mdp.model(), again.model());
    }
});
