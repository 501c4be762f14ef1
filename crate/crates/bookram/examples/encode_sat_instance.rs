//! Encodes "some n-vertex graph avoids (B_r, B_s)" as CNF.
//!
//! Edge variables x_{ij} say which edges exist. Triangle indicators feed
//! per-edge cardinality counters so that no edge closes r triangles in
//! the graph or s in the complement; models correspond exactly to the
//! avoiding graphs on n labeled vertices. Optional symmetry breaking
//! keeps, for every avoiding graph, at least its lex-least labeling.

use bookram::graph::BookParams;
use bookram::satenc::{dimacs_string, encode_books, encode_naive, EncodeOptions};

fn main() {
    let p = BookParams::new(2, 2);

    // The naive encoding spells out one clause per embedded book; fine
    // for tiny n, explosive beyond it.
    let naive = encode_naive(6, p).expect("small enough for the naive form");
    println!(
        "naive   n=6 (B_2,B_2): {:>4} vars {:>6} clauses",
        naive.num_vars,
        naive.clause_count()
    );

    // The indicator encoding stays polynomial.
    for n in [6, 9, 12] {
        for symmetry in [false, true] {
            let opts = EncodeOptions { symmetry_breaking: symmetry };
            let (f, _vars) = encode_books(n, p, opts).expect("within the encoder cap");
            println!(
                "books   n={n:>2} (B_2,B_2){}: {:>5} vars {:>6} clauses",
                if symmetry { " +sym" } else { "     " },
                f.num_vars,
                f.clause_count()
            );
        }
    }

    // Full DIMACS for a small instance.
    let (f, vars) = encode_books(4, BookParams::new(1, 1), EncodeOptions::default())
        .expect("tiny instance");
    println!("\nDIMACS for n=4 (B_1,B_1), {} base vars:", vars.num_base_vars());
    print!("{}", dimacs_string(&f));
}
