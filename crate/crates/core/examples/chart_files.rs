//! Chart files: serialise a built-in structure, read it back, and run the
//! same lint as `sympcalc chart-lint`.

use sympcalc::cli::cmd_chart_lint;
use sympcalc::geometry::{builtin_chart, chart_to_file, BuiltinKind};

fn main() {
    let b = builtin_chart(BuiltinKind::FubiniStudy, 1).unwrap();
    let file = chart_to_file(&b);
    let text = serde_json::to_string_pretty(&file).unwrap();
    println!("{text}");

    let path = std::env::temp_dir().join("sympcalc-fubini-study-1.json");
    std::fs::write(&path, &text).unwrap();
    let outcome = cmd_chart_lint(&path).unwrap();
    print!("{}", outcome.report.to_text());
    std::fs::remove_file(&path).ok();
}
