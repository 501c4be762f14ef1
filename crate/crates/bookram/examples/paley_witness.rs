//! Builds Paley-type witnesses over small fields and verifies each one.
//!
//! For a prime power `q ≡ 1 (mod 4)`, split the nonzero field elements
//! into squares `Q` and non-squares `N` and connect two blocks of `q`
//! vertices with difference sets `(Q, Q, N)`. Writing `q = 2n − 1`, the
//! resulting graph on `2q` vertices avoids `B_{n−1}` while its complement
//! avoids `B_n`, so `R(B_{n−1}, B_n) >= 4n − 1`.

use bookram::field::paley_book_graph;
use bookram::graph::BookParams;

fn main() {
    for q in [5, 9, 13, 17, 25, 29] {
        let g = paley_book_graph(q).expect("q is a usable prime power");
        let n = (q + 1) / 2;
        let p = BookParams::new(n - 1, n);

        let graph_max = g.max_book_pages();
        let complement_max = g.complement().max_book_pages();
        let ok = g.is_ramsey_graph(p);
        println!(
            "q={q:>2}: {} vertices, page maxima {graph_max}/{complement_max} \
             (bounds {}/{}), R(B_{},B_{}) >= {}  {}",
            g.n(),
            p.r,
            p.s,
            p.r,
            p.s,
            4 * n - 1,
            if ok { "verified" } else { "FAILED" }
        );
        assert!(ok);

        if let Ok(g6) = g.to_graph6() {
            println!("      graph6: {g6}");
        }
    }
}
