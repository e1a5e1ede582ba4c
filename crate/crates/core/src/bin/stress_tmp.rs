use symhecke::engine::*;
use symhecke::field::PrimeField;
use std::time::Instant;

fn main() {
    let f = PrimeField::new(3).unwrap();
    for (name, trials) in [("pieri", 200u64), ("dual-pieri", 200), ("module-identity", 0)] {
        let t0 = Instant::now();
        let report = verify_suite(name, f, 7, trials, 8).unwrap();
        println!("{}: {:?} | total {} passed {} failed {} findings {}",
            name, t0.elapsed(), report.summary.total, report.summary.passed,
            report.summary.failed, report.summary.findings);
        for c in report.cases.iter().filter(|c| !c.pass).take(5) {
            println!("  FAIL [{}] {} expected {} got {}", c.suite, c.case, c.expected, c.got);
        }
    }
}
