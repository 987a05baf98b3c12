#![no_main]

use libfuzzer_sys::fuzz_target;

const MODEL: &str = include_str!("../../models/basic.cetcs");

fuzz_target!(|data: &[u8]| {
    let model = cetcs_cli::model::parse(MODEL).expect("sample model loads");
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(ctx) = cetcs::logic::parse_context(model.signature(), text) {
            assert_eq!(ctx.tuples().len(), ctx.objects().iter().map(|o| o.len()).product::<usize>());
        }
    }
});
