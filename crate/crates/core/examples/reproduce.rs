//! The published-values check behind `optomech reproduce`, driven from the
//! built-in criteria table.

use optomech::cli::reproduce::{reproduce, CriteriaFile, ReproduceOptions, Status};

fn main() {
    let criteria = CriteriaFile::builtin();
    let report = reproduce(&criteria, ReproduceOptions::default());
    for row in &report.rows {
        let mark = match row.status {
            Status::Pass => "ok  ",
            Status::Fail => "FAIL",
            Status::KnownDiscrepancy => "known",
        };
        let computed = row.computed.map_or("n/a".to_string(), |c| format!("{c:.4e}"));
        println!(
            "{mark:<5} {:<36} computed {computed:>11}  published {:.4e}  ({})",
            row.id, row.published, row.tolerance
        );
    }
    println!("all rows reproduced: {}", report.all_passed());
}
