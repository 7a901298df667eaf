#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(instance) = cmabmt::pmc::parse_pmc(text) {
        let again = cmabmt::pmc::parse_pmc(&cmabmt::pmc::format_pmc(&instance)).expect("formatted instance reparses");
        assert_eq!(instance.rows(), again.rows());
        assert_eq!(instance.budget(), again.budget());
    }
});
