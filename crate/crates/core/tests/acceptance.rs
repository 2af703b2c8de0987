use koszulkit::selftest::{run_all, DEFAULT_SEED};

fn main() {
    let seed = std::env::var("KOSZULKIT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    println!("acceptance suite, seed {seed}");
    let results = run_all(seed);
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
