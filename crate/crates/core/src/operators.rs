//! Duplication `D_i` and coduplication `D'_i` of layer patterns.
//!
//! On the last coordinate of a vertex pattern, `D` sends `s0 -> s00` and
//! `s1 -> {s01, s10}`; `D'` sends `s1 -> s11` and `s0 -> {s01, s10}`. On edge
//! patterns a starred last coordinate goes to `{s0*, s*0}` under `D` and to
//! `{s1*, s*1}` under `D'`. Acting on coordinate `i` means moving it last,
//! applying the rule, and putting the produced pair at `i, i + 1`.
//!
//! Some statements of these rules list `s01` twice for `D` and `s*s` for
//! `D'`; those are misprints. The forms above are the only ones for which
//! the spanning-tree correspondence with edge duplication and subdivision
//! holds, which the test suites check.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::patterns::{Kind, Pattern, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Duplication {
    /// Mirrors duplicating an edge.
    D,
    /// Mirrors subdividing an edge.
    DPrime,
}

impl FromStr for Duplication {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" | "d" | "dup" => Ok(Duplication::D),
            "D'" | "d'" | "codup" => Ok(Duplication::DPrime),
            _ => Err(Error::Parse(format!("unknown duplication {s:?}"))),
        }
    }
}

fn images(w: &Word, i: usize, kind: Duplication) -> Vec<Word> {
    let c = w.char_at(i);
    let rest = w.remove(i);
    let pair = |x: char, y: char| rest.insert(i, y).insert(i, x);
    match (kind, c) {
        (Duplication::D, '0') => vec![pair('0', '0')],
        (Duplication::D, '1') => vec![pair('0', '1'), pair('1', '0')],
        (Duplication::D, _) => vec![pair('0', '*'), pair('*', '0')],
        (Duplication::DPrime, '1') => vec![pair('1', '1')],
        (Duplication::DPrime, '0') => vec![pair('0', '1'), pair('1', '0')],
        (Duplication::DPrime, _) => vec![pair('1', '*'), pair('*', '1')],
    }
}

/// `D_i` or `D'_i` of a pattern of either kind.
pub fn duplicate(p: &Pattern, i: usize, kind: Duplication) -> Result<Pattern> {
    let len = p.word_len();
    if i >= len {
        return Err(Error::Coordinate { coord: i, len });
    }
    let (zeros, ones) = match kind {
        Duplication::D => (p.zeros() + 1, p.ones()),
        Duplication::DPrime => (p.zeros(), p.ones() + 1),
    };
    Pattern::new(p.kind(), zeros, ones, p.words().iter().flat_map(|w| images(w, i, kind)))
}

pub fn duplicate_v(x: &Pattern, i: usize, kind: Duplication) -> Result<Pattern> {
    if x.kind() != Kind::Vertex {
        return Err(Error::KindMismatch { expected: "vertex", found: "edge" });
    }
    duplicate(x, i, kind)
}

pub fn duplicate_e(y: &Pattern, i: usize, kind: Duplication) -> Result<Pattern> {
    if y.kind() != Kind::Edge {
        return Err(Error::KindMismatch { expected: "edge", found: "vertex" });
    }
    duplicate(y, i, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::{Multigraph, Operation};
    use crate::patterns::{dual_pattern, x_pattern, y_pattern};

    fn pat(kind: Kind, zeros: usize, ones: usize, ws: &[&str]) -> Pattern {
        Pattern::new(kind, zeros, ones, ws.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    #[test]
    fn vertex_examples() {
        let x = pat(Kind::Vertex, 1, 1, &["01", "10"]);
        let d = duplicate_v(&x, 1, Duplication::D).unwrap();
        assert_eq!(d, pat(Kind::Vertex, 2, 1, &["001", "010", "100"]));
        assert_eq!(d, x_pattern(&Multigraph::bond(3)).unwrap());
        let c = duplicate_v(&x, 1, Duplication::DPrime).unwrap();
        assert_eq!(c, pat(Kind::Vertex, 1, 2, &["011", "101", "110"]));
        assert_eq!(c, x_pattern(&Multigraph::cycle(3)).unwrap());
        let empty = Pattern::empty(Kind::Vertex, 1, 1);
        assert!(duplicate_v(&empty, 0, Duplication::D).unwrap().is_empty());
        assert!(matches!(duplicate_v(&x, 2, Duplication::D), Err(Error::Coordinate { .. })));
        assert!(duplicate_e(&x, 0, Duplication::D).is_err());
    }

    #[test]
    fn edge_examples() {
        let star = pat(Kind::Edge, 0, 0, &["*"]);
        let tri = Multigraph::cycle(3).with_distinguished(0).unwrap();
        assert_eq!(duplicate_e(&star, 0, Duplication::DPrime).unwrap(), y_pattern(&tri, 0).unwrap());

        let y = y_pattern(&tri, 0).unwrap();
        let dup = tri.apply_operation(Operation::Duplicate(1)).unwrap();
        assert_eq!(duplicate_e(&y, 0, Duplication::D).unwrap(), y_pattern(&dup, 0).unwrap());
        assert!(duplicate_e(&Pattern::empty(Kind::Edge, 0, 0), 0, Duplication::D).unwrap().is_empty());
    }

    #[test]
    fn duality_swaps_the_operators() {
        let x = x_pattern(&Multigraph::k4_minus_edge()).unwrap();
        for i in 0..5 {
            let lhs = dual_pattern(&duplicate_v(&x, i, Duplication::D).unwrap());
            let rhs = duplicate_v(&dual_pattern(&x), i, Duplication::DPrime).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
