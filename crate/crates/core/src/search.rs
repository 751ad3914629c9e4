//! Exhaustive searches: the spanning-tree maximum over connected
//! series-parallel graphs and the table of `m(d)`.

use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::multigraph::{Multigraph, Operation};
use crate::patterns::y_pattern;
use crate::spterm::{canonicalize, enumerate_connected_sp_with, shards, SpTerm, TermCatalog};

/// Largest `d` for the exhaustive spanning-tree search.
pub const MAX_TREE_SEARCH: usize = 10;
/// Largest `d` for the witness chain.
pub const MAX_CHAIN: usize = 40;
/// Largest `d` for the `m(d)` search.
pub const MAX_M: usize = 16;

/// Fibonacci numbers with `F_1 = F_2 = 1`; `F_0 = 0`.
pub fn fib(k: usize) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Term(SpTerm),
    Graph(Multigraph),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Term(t) => write!(f, "{t}"),
            Witness::Graph(g) => f.write_str(&g.to_json()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub d: usize,
    pub value: u128,
    pub witness: Witness,
    pub elapsed: Duration,
}

/// Maximum number of spanning trees over connected series-parallel
/// multigraphs with `d` edges, by exhaustive enumeration.
pub fn max_spanning_trees(d: usize) -> Result<TableRow> {
    max_spanning_trees_with(d, Exec::default())
}

pub fn max_spanning_trees_with(d: usize, exec: Exec) -> Result<TableRow> {
    if d > MAX_TREE_SEARCH {
        return Err(Error::SizeGuard(format!("exhaustive search is limited to d <= {MAX_TREE_SEARCH}")));
    }
    let start = Instant::now();
    let graphs = enumerate_connected_sp_with(d, exec);
    let counts = exec.map(&graphs, |g| g.spanning_trees().map(|t| t.len()));
    let mut best: Option<(usize, usize)> = None;
    for (i, c) in counts.into_iter().enumerate() {
        let c = c?;
        if best.is_none_or(|(b, _)| c > b) {
            best = Some((c, i));
        }
    }
    let (value, i) = best.expect("K1 and its extensions exist for every d");
    Ok(TableRow { d, value: value as u128, witness: Witness::Graph(graphs[i].clone()), elapsed: start.elapsed() })
}

/// The chain `G_0 = K1`, `G_1 = K2`, then alternately duplicating (even
/// `d`) and subdividing (odd `d`) the last edge; row `d` counts the
/// spanning trees of `G_d`.
pub fn witness_chain(d_max: usize) -> Result<Vec<TableRow>> {
    if d_max > MAX_CHAIN {
        return Err(Error::SizeGuard(format!("witness chain is limited to d <= {MAX_CHAIN}")));
    }
    let mut rows = Vec::new();
    let mut g = Multigraph::k1();
    for d in 0..=d_max {
        let start = Instant::now();
        if d == 1 {
            g = g.apply_operation(Operation::LeafAdd(0))?;
        } else if d >= 2 {
            let last = g.edge_count() - 1;
            let op = if d % 2 == 0 { Operation::Duplicate(last) } else { Operation::Subdivide(last) };
            g = g.apply_operation(op)?;
        }
        let value = g.spanning_tree_count()?;
        rows.push(TableRow { d, value, witness: Witness::Graph(g.clone()), elapsed: start.elapsed() });
    }
    Ok(rows)
}

/// `|Y(G, e)|` for the marked graph of `t`: pairs of a spanning tree of the
/// network and a terminal-separating 2-forest differing in one edge.
pub fn y_size(t: &SpTerm) -> Result<u64> {
    let mut scratch = Vec::new();
    y_size_into(t, &mut scratch)
}

fn y_size_into(t: &SpTerm, bitmap: &mut Vec<u64>) -> Result<u64> {
    let d = t.edge_count();
    let (trees, forests) = t.tree_sets()?;
    if d <= 24 {
        let words = (1usize << d).div_ceil(64);
        if bitmap.len() < words {
            bitmap.resize(words, 0);
        }
        for &f in &forests {
            bitmap[(f >> 6) as usize] |= 1 << (f & 63);
        }
        let mut count = 0u64;
        for &tr in &trees {
            let mut bits = tr;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits ^= b;
                let f = tr ^ b;
                count += bitmap[(f >> 6) as usize] >> (f & 63) & 1;
            }
        }
        for &f in &forests {
            bitmap[(f >> 6) as usize] = 0;
        }
        Ok(count)
    } else {
        let set: std::collections::HashSet<u64> = forests.into_iter().collect();
        Ok(trees
            .iter()
            .map(|&tr| {
                let mut bits = tr;
                let mut c = 0;
                while bits != 0 {
                    let b = bits & bits.wrapping_neg();
                    bits ^= b;
                    c += set.contains(&(tr ^ b)) as u64;
                }
                c
            })
            .sum())
    }
}

/// Best `(value, canonical key, term)`; ties go to the smaller key.
type Best = Option<(u64, String, SpTerm)>;

fn merge(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if (y.0, std::cmp::Reverse(&y.1)) > (x.0, std::cmp::Reverse(&x.1)) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}

/// `m(d)`: the largest `|Y(G, e)|` over marked series-parallel networks
/// with `d` edges besides `e`.
pub fn m_value(d: usize, exec: Exec) -> Result<TableRow> {
    if d == 0 || d > MAX_M {
        return Err(Error::SizeGuard(format!("m(d) is computed for 1 <= d <= {MAX_M}")));
    }
    let start = Instant::now();
    let catalog = TermCatalog::below(d);
    let shards = shards(d);
    let results = exec.map(&shards, |shard| -> Result<Best> {
        let mut best: Best = None;
        let mut bitmap = Vec::new();
        let mut err = None;
        catalog.for_each_in_shard(shard, &mut |t| {
            if err.is_some() {
                return;
            }
            match y_size_into(&t, &mut bitmap) {
                Ok(c) => {
                    let floor = best.as_ref().map_or(0, |b| b.0);
                    if best.is_none() || c >= floor {
                        let key = canonicalize(&t).as_str().to_string();
                        best = merge(best.take(), Some((c, key, t)));
                    }
                }
                Err(e) => err = Some(e),
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(best),
        }
    });
    let mut best: Best = None;
    for r in results {
        best = merge(best, r?);
    }
    let (value, _, term) = best.expect("terms exist for d >= 1");
    let witness = term.normalized();
    let witness =
        if canonicalize(&witness).as_str() == witness.to_string() { witness } else { witness.flip().normalized() };
    Ok(TableRow { d, value: value as u128, witness: Witness::Term(witness), elapsed: start.elapsed() })
}

pub fn m_table(d_max: usize) -> Result<Vec<TableRow>> {
    m_table_with(d_max, Exec::default())
}

pub fn m_table_with(d_max: usize, exec: Exec) -> Result<Vec<TableRow>> {
    if d_max > MAX_M {
        return Err(Error::SizeGuard(format!("m(d) is computed for 1 <= d <= {MAX_M}")));
    }
    (1..=d_max).map(|d| m_value(d, exec)).collect()
}

/// `m(d)` by brute force over every connected series-parallel graph with
/// `d + 1` edges and every edge that is neither a loop nor a bridge. This
/// includes graphs with blocks away from the marked edge.
pub fn m_value_unrestricted(d: usize, exec: Exec) -> Result<u128> {
    if d == 0 || d >= MAX_TREE_SEARCH {
        return Err(Error::SizeGuard(format!("brute-force m(d) is limited to d < {MAX_TREE_SEARCH}")));
    }
    let graphs = enumerate_connected_sp_with(d + 1, exec);
    let values = exec.map(&graphs, |g| -> Result<usize> {
        let mut best = 0;
        for e in 0..g.edge_count() {
            if !g.is_loop(e) && !g.is_bridge(e) {
                best = best.max(y_pattern(g, e)?.len());
            }
        }
        Ok(best)
    });
    let mut best = 0;
    for v in values {
        best = best.max(v?);
    }
    Ok(best as u128)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub d: usize,
    pub lower: u128,
    pub value: u128,
    pub upper: u128,
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}: {} <= {} <= {}", self.d, self.lower, self.value, self.upper)
    }
}

/// Checks `F_{d+2} - 1 <= m(d) <= floor(d F_{d+2} / 2)` on every row.
pub fn check_m_bounds(rows: &[TableRow]) -> Result<Vec<BoundCheck>> {
    rows.iter()
        .map(|r| {
            let f = fib(r.d + 2);
            let check = BoundCheck { d: r.d, lower: f - 1, value: r.value, upper: r.d as u128 * f / 2 };
            if check.lower <= check.value && check.value <= check.upper {
                Ok(check)
            } else {
                Err(Error::BoundViolation(check.to_string()))
            }
        })
        .collect()
}

pub fn rows_to_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("d,value,witness-term,millis\n");
    for r in rows {
        let w = r.witness.to_string().replace('"', "\"\"");
        s.push_str(&format!("{},{},\"{}\",{}\n", r.d, r.value, w, r.elapsed.as_millis()));
    }
    s
}

pub fn rows_to_markdown(rows: &[TableRow]) -> String {
    let mut s = String::from("| d | value | witness | ms |\n|---|---|---|---|\n");
    for r in rows {
        s.push_str(&format!("| {} | {} | `{}` | {} |\n", r.d, r.value, r.witness, r.elapsed.as_millis()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci() {
        assert_eq!((fib(1), fib(2), fib(3), fib(7), fib(10)), (1, 1, 2, 13, 55));
    }

    #[test]
    fn small_tree_maxima() {
        assert_eq!(max_spanning_trees(0).unwrap().value, 1);
        assert_eq!(max_spanning_trees(4).unwrap().value, 5);
        assert!(max_spanning_trees(MAX_TREE_SEARCH + 1).is_err());
    }

    #[test]
    fn chain_follows_fibonacci() {
        let rows = witness_chain(10).unwrap();
        for r in &rows {
            assert_eq!(r.value, fib(r.d + 1));
        }
    }

    #[test]
    fn first_m_values() {
        let rows = m_table_with(6, Exec::Sequential).unwrap();
        let values: Vec<u128> = rows.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![1, 2, 4, 8, 14, 24]);
        for r in &rows {
            let Witness::Term(t) = &r.witness else { panic!() };
            assert_eq!(y_size(t).unwrap() as u128, r.value);
            let g = t.to_marked_graph();
            assert_eq!(y_pattern(&g, 0).unwrap().len() as u128, r.value);
        }
        assert_eq!(
            m_table_with(6, Exec::Parallel).unwrap().iter().map(|r| &r.witness).collect::<Vec<_>>(),
            rows.iter().map(|r| &r.witness).collect::<Vec<_>>()
        );
        check_m_bounds(&rows).unwrap();
    }

    #[test]
    fn bounds_catch_bad_rows() {
        let row = |d, value| TableRow { d, value, witness: Witness::Term(SpTerm::Edge), elapsed: Duration::ZERO };
        let checks = check_m_bounds(&[row(1, 1), row(5, 14), row(10, 204)]).unwrap();
        assert_eq!((checks[1].lower, checks[1].upper), (12, 32));
        assert_eq!((checks[2].lower, checks[2].upper), (143, 720));
        assert!(matches!(check_m_bounds(&[row(5, 11)]), Err(Error::BoundViolation(_))));
    }

    #[test]
    fn csv_shape() {
        let rows = m_table(2).unwrap();
        let csv = rows_to_csv(&rows);
        assert!(csv.starts_with("d,value,witness-term,millis\n1,1,"));
        assert_eq!(csv.lines().count(), 3);
    }
}
