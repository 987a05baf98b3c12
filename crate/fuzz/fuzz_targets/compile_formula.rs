#![no_main]

use cetcs::logic::{compile, parse, Context};
use libfuzzer_sys::fuzz_target;

const MODEL: &str = include_str!("../../models/basic.cetcs");

fuzz_target!(|data: &[u8]| {
    let model = cetcs_cli::model::parse(MODEL).expect("sample model loads");
    let sig = model.signature();
    let ctx = Context::from_vars(sig, &[("x", "X"), ("y", "Y")]).expect("context");
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(phi) = parse(sig, &ctx, text) else { return };
    if phi.depth() > 6 {
        return;
    }
    if compile(sig, &ctx, &phi).is_ok() {
        let report = cetcs::logic::verify(sig, &ctx, &phi).expect("compiled formulas verify");
        assert!(report.passed(), "{report}");
    }
});
