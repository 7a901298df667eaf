#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = cmabmt::harness::read_curve_csv(data) {
        let mut buf = Vec::new();
        cmabmt::harness::write_curve_csv(&mut buf, &rows).expect("writing to memory");
        assert_eq!(cmabmt::harness::read_curve_csv(buf.as_slice()).expect("rewritten curve reparses"), rows);
    }
    let _ = cmabmt::harness::read_summary_csv(data);
});
