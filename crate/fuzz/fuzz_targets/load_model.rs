#![no_main]

use cetcs_cli::model::{parse, render_object};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(model) = parse(text) else { return };
    let objects = model.objects();
    let rendered: String = objects.iter().map(|(n, o)| format!("{}\n", render_object(n, o))).collect();
    let again = parse(&rendered).expect("rendered objects parse");
    assert_eq!(objects, again.objects());
});
