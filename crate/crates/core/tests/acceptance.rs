use hallring::acceptance;
use hallring::error::DEFAULT_BUDGET;

#[test]
fn acceptance_criteria() {
    let start = std::time::Instant::now();
    let results = acceptance::run_all(DEFAULT_BUDGET, 0);
    for r in &results {
        println!("{} [{:.2}s]", r.line(), r.elapsed.as_secs_f64());
    }
    let total = start.elapsed().as_secs_f64();
    println!("total {total:.2}s");
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(total < 300.0, "suite took {total:.1}s");
}
