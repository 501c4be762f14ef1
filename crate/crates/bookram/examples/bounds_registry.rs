//! Queries the built-in bound records and persists them to a registry
//! file.
//!
//! A registry is an append-friendly list of bound assertions (lower,
//! upper, exact), each with free-text provenance and, where possible, a
//! witness reference plus a digest of the graph it resolves to. Inserts
//! verify lower and exact witnesses; queries aggregate to the best known
//! interval.

use bookram::witness::{bundled_bounds, Registry};

fn main() {
    let records = bundled_bounds().expect("built-in records resolve");
    let reg = Registry::from_records(records);
    println!("{} built-in records", reg.records().len());

    for (r, s) in [(1, 1), (2, 3), (6, 8), (5, 7), (2, 13), (16, 16), (50, 51)] {
        let summary = reg.query(r, s);
        println!("\n{summary}");
        let mut sources: Vec<&String> =
            summary.lower_sources.iter().chain(&summary.upper_sources).collect();
        sources.dedup();
        for source in sources {
            println!("  source: {source}");
        }
    }

    let dir = std::env::temp_dir().join("bookram_registry_example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("bounds.jsonl");
    reg.save(&path).expect("atomic save");
    let reloaded = Registry::load(&path).expect("parses back");
    assert_eq!(reloaded.records(), reg.records());
    println!("\nround-tripped {} records through {}", reloaded.records().len(), path.display());
}
