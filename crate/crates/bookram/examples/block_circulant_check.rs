//! Checks a two-block circulant description without expanding the graph,
//! then confirms the verdict against the expanded-graph oracle.
//!
//! A description `(m; D11, D12, D22)` places two blocks of `m` vertices
//! and wires them by circulant difference sets. Common-neighbor counts of
//! the expansion are exact functions of the sets, so book avoidance
//! reduces to six families of per-difference conditions.

use bookram::circulant::BlockCirculantSpec;
use bookram::graph::BookParams;

fn main() {
    // A 24-vertex witness for R(B_5,B_7) >= 25. D22 is omitted: it
    // defaults to the complement of D11 in Z_m minus {0}.
    let spec: BlockCirculantSpec =
        "12; D11={2,4,5,7,8,10}; D12={0,3,4,6,11}".parse().expect("well-formed description");
    let p = BookParams::new(5, 7);

    let report = spec.check_book_conditions(p);
    println!("closed-form check of {spec} against (B_{},B_{}):", p.r, p.s);
    println!("{report}");

    let g = spec.expand();
    let oracle = g.is_ramsey_graph(p);
    println!(
        "\nexpanded graph: {} vertices, {} edges, oracle says {}",
        g.n(),
        g.edge_count(),
        if oracle { "avoiding" } else { "not avoiding" }
    );
    assert_eq!(report.passes(), oracle);

    // Perturbing one connection flips both verdicts in lockstep.
    let mut d12 = spec.d12().to_vec();
    d12.push(1);
    let broken = BlockCirculantSpec::with_complement_d22(12, spec.d11().to_vec(), d12)
        .expect("still well-formed");
    let broken_report = broken.check_book_conditions(p);
    println!("\nafter adding 1 to D12: closed-form {}", verdict(broken_report.passes()));
    assert_eq!(broken_report.passes(), broken.expand().is_ramsey_graph(p));
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}
