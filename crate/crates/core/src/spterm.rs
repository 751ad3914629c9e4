//! Two-terminal series-parallel networks as terms.
//!
//! A term `t` stands for the marked graph obtained by joining the two
//! terminals of its network with a distinguished edge. These are exactly the
//! 2-connected series-parallel graphs with a distinguished edge, and duality
//! and 2-sums become syntactic on terms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::iso::{canonical_form, CanonicalGraph};
use crate::multigraph::{Multigraph, Operation, MAX_EDGES};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpTerm {
    Edge,
    /// Ordered chain, at least two children, none of them a series node.
    Series(Vec<SpTerm>),
    /// At least two children, none of them a parallel node.
    Parallel(Vec<SpTerm>),
}

/// Identifies a term up to isomorphism of its marked graph (terminal swap allowed).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl SpTerm {
    /// Series composition, flattening nested series children.
    pub fn series(children: Vec<SpTerm>) -> SpTerm {
        Self::compose(children, true)
    }

    /// Parallel composition, flattening nested parallel children.
    pub fn parallel(children: Vec<SpTerm>) -> SpTerm {
        Self::compose(children, false)
    }

    fn compose(children: Vec<SpTerm>, series: bool) -> SpTerm {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                SpTerm::Series(inner) if series => flat.extend(inner),
                SpTerm::Parallel(inner) if !series => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => panic!("composition needs at least one child"),
            1 => flat.pop().unwrap(),
            _ if series => SpTerm::Series(flat),
            _ => SpTerm::Parallel(flat),
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            SpTerm::Edge => 1,
            SpTerm::Series(c) | SpTerm::Parallel(c) => c.iter().map(SpTerm::edge_count).sum(),
        }
    }

    /// Swaps series and parallel nodes throughout.
    pub fn dual(&self) -> SpTerm {
        match self {
            SpTerm::Edge => SpTerm::Edge,
            SpTerm::Series(c) => SpTerm::Parallel(c.iter().map(SpTerm::dual).collect()),
            SpTerm::Parallel(c) => SpTerm::Series(c.iter().map(SpTerm::dual).collect()),
        }
    }

    /// The same network with its terminals swapped.
    pub fn flip(&self) -> SpTerm {
        match self {
            SpTerm::Edge => SpTerm::Edge,
            SpTerm::Series(c) => SpTerm::Series(c.iter().rev().map(SpTerm::flip).collect()),
            SpTerm::Parallel(c) => SpTerm::Parallel(c.iter().map(SpTerm::flip).collect()),
        }
    }

    /// Parallel children sorted by their printed form, recursively. Two terms
    /// normalise to the same term iff their networks are isomorphic with the
    /// terminals fixed.
    pub fn normalized(&self) -> SpTerm {
        match self {
            SpTerm::Edge => SpTerm::Edge,
            SpTerm::Series(c) => SpTerm::Series(c.iter().map(SpTerm::normalized).collect()),
            SpTerm::Parallel(c) => {
                let mut kids: Vec<(String, SpTerm)> = c
                    .iter()
                    .map(|k| {
                        let n = k.normalized();
                        (n.to_string(), n)
                    })
                    .collect();
                kids.sort_by(|a, b| a.0.cmp(&b.0));
                SpTerm::Parallel(kids.into_iter().map(|(_, k)| k).collect())
            }
        }
    }

    /// The marked graph: terminals are vertices 0 and 1, the distinguished
    /// edge joins them and comes first, then the leaves left to right.
    pub fn to_marked_graph(&self) -> Multigraph {
        let mut edges = vec![(0, 1)];
        let mut next = 2;
        self.lay_out(0, 1, &mut next, &mut edges);
        Multigraph::new(next, edges)
            .and_then(|g| g.with_distinguished(0))
            .expect("series-parallel terms always yield valid marked graphs")
    }

    fn lay_out(&self, s: usize, t: usize, next: &mut usize, edges: &mut Vec<(usize, usize)>) {
        match self {
            SpTerm::Edge => edges.push((s, t)),
            SpTerm::Parallel(c) => c.iter().for_each(|k| k.lay_out(s, t, next, edges)),
            SpTerm::Series(c) => {
                let mut from = s;
                for (i, k) in c.iter().enumerate() {
                    let to = if i + 1 == c.len() {
                        t
                    } else {
                        *next += 1;
                        *next - 1
                    };
                    k.lay_out(from, to, next, edges);
                    from = to;
                }
            }
        }
    }

    /// `(T, F)`: spanning trees of the network and spanning 2-forests
    /// separating its terminals. For the marked graph `(G, e)` these are
    /// `|X(G \ e)|` and `|X(G / e)|`.
    pub fn tf_counts(&self) -> (u128, u128) {
        match self {
            SpTerm::Edge => (1, 1),
            SpTerm::Series(c) => c.iter().skip(1).fold(c[0].tf_counts(), |(t, f), k| {
                let (tk, fk) = k.tf_counts();
                (t * tk, f * tk + t * fk)
            }),
            SpTerm::Parallel(c) => c.iter().skip(1).fold(c[0].tf_counts(), |(t, f), k| {
                let (tk, fk) = k.tf_counts();
                (t * fk + f * tk, f * fk)
            }),
        }
    }

    /// The sets behind [`SpTerm::tf_counts`] as bitmasks over leaf positions.
    pub fn tree_sets(&self) -> Result<(Vec<u64>, Vec<u64>)> {
        if self.edge_count() > MAX_EDGES {
            return Err(Error::SizeGuard(format!("term has more than {MAX_EDGES} edges")));
        }
        let mut offset = 0;
        Ok(self.sets_at(&mut offset))
    }

    fn sets_at(&self, offset: &mut usize) -> (Vec<u64>, Vec<u64>) {
        fn product(a: &[u64], b: &[u64], out: &mut Vec<u64>) {
            for &x in a {
                out.extend(b.iter().map(|&y| x | y));
            }
        }
        match self {
            SpTerm::Edge => {
                let bit = 1u64 << *offset;
                *offset += 1;
                (vec![bit], vec![0])
            }
            SpTerm::Series(c) | SpTerm::Parallel(c) => {
                let series = matches!(self, SpTerm::Series(_));
                let (mut t, mut f) = c[0].sets_at(offset);
                for k in &c[1..] {
                    let (tk, fk) = k.sets_at(offset);
                    let (mut t2, mut f2) = (Vec::new(), Vec::new());
                    if series {
                        product(&t, &tk, &mut t2);
                        product(&f, &tk, &mut f2);
                        product(&t, &fk, &mut f2);
                    } else {
                        product(&t, &fk, &mut t2);
                        product(&f, &tk, &mut t2);
                        product(&f, &fk, &mut f2);
                    }
                    t = t2;
                    f = f2;
                }
                (t, f)
            }
        }
    }
}

pub fn dual(t: &SpTerm) -> SpTerm {
    t.dual()
}

/// Key of the term up to parallel reordering and terminal swap.
pub fn canonicalize(t: &SpTerm) -> CanonicalKey {
    let a = t.normalized().to_string();
    let b = t.flip().normalized().to_string();
    CanonicalKey(a.min(b))
}

impl fmt::Display for SpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpTerm::Edge => f.write_str("e"),
            SpTerm::Series(c) | SpTerm::Parallel(c) => {
                f.write_str(if matches!(self, SpTerm::Series(_)) { "S(" } else { "P(" })?;
                for (i, k) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{k}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for SpTerm {
    type Err = Error;

    /// Parses `e`, `S(t1,t2,…)` and `P(t1,t2,…)`. Nested compositions of the
    /// same kind are flattened.
    fn from_str(s: &str) -> Result<SpTerm> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_term(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input at offset {pos} in term")));
        }
        Ok(t)
    }
}

fn parse_term(c: &[char], pos: &mut usize) -> Result<SpTerm> {
    let err = |p: usize, what: &str| Error::Parse(format!("expected {what} at offset {p} in term"));
    match c.get(*pos) {
        Some('e') => {
            *pos += 1;
            Ok(SpTerm::Edge)
        }
        Some(&k @ ('S' | 'P')) => {
            *pos += 1;
            if c.get(*pos) != Some(&'(') {
                return Err(err(*pos, "'('"));
            }
            *pos += 1;
            let mut kids = vec![parse_term(c, pos)?];
            loop {
                match c.get(*pos) {
                    Some(',') => {
                        *pos += 1;
                        kids.push(parse_term(c, pos)?);
                    }
                    Some(')') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(err(*pos, "',' or ')'")),
                }
            }
            if kids.len() < 2 {
                return Err(Error::Parse("compositions need at least two children".into()));
            }
            Ok(if k == 'S' { SpTerm::series(kids) } else { SpTerm::parallel(kids) })
        }
        _ => Err(err(*pos, "'e', 'S' or 'P'")),
    }
}

/// Oriented, normalised terms of every size up to a bound, split by root kind.
pub struct TermCatalog {
    /// Edge or parallel-rooted terms, by edge count.
    non_series: Vec<Vec<SpTerm>>,
    /// Edge or series-rooted terms, by edge count.
    non_parallel: Vec<Vec<SpTerm>>,
}

/// The root structure of a batch of terms of one size; enumeration and the
/// exhaustive searches are sharded by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shard {
    Edge,
    /// Ordered child sizes of a series root.
    Series(Vec<usize>),
    /// `(child size, multiplicity)` of a parallel root, sizes decreasing.
    Parallel(Vec<(usize, usize)>),
}

impl TermCatalog {
    /// Catalog holding all oriented terms with fewer than `limit` edges.
    pub fn below(limit: usize) -> TermCatalog {
        let mut cat = TermCatalog { non_series: vec![vec![]], non_parallel: vec![vec![]] };
        for n in 1..limit {
            let mut series = Vec::new();
            let mut parallel = Vec::new();
            for shard in shards(n) {
                match shard {
                    Shard::Edge => {}
                    Shard::Series(_) => cat.for_each_in_shard(&shard, &mut |t| series.push(t)),
                    Shard::Parallel(_) => cat.for_each_in_shard(&shard, &mut |t| parallel.push(t)),
                }
            }
            let mut ns = parallel;
            let mut np = series;
            if n == 1 {
                ns.push(SpTerm::Edge);
                np.push(SpTerm::Edge);
            }
            cat.non_series.push(ns);
            cat.non_parallel.push(np);
        }
        cat
    }

    fn limit(&self) -> usize {
        self.non_series.len()
    }

    /// Calls `f` on every normalised oriented term of the shard.
    pub fn for_each_in_shard(&self, shard: &Shard, f: &mut dyn FnMut(SpTerm)) {
        match shard {
            Shard::Edge => f(SpTerm::Edge),
            Shard::Series(sizes) => {
                assert!(sizes.iter().all(|&w| w < self.limit()));
                let lists: Vec<&[SpTerm]> = sizes.iter().map(|&w| self.non_series[w].as_slice()).collect();
                odometer(&lists.iter().map(|l| l.len()).collect::<Vec<_>>(), &mut |idx| {
                    f(SpTerm::Series(idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect()))
                });
            }
            Shard::Parallel(groups) => {
                assert!(groups.iter().all(|&(w, _)| w < self.limit()));
                // Each group picks a multiset: nondecreasing index tuples.
                let choices: Vec<Vec<Vec<usize>>> =
                    groups.iter().map(|&(w, m)| multisets(self.non_parallel[w].len(), m)).collect();
                odometer(&choices.iter().map(Vec::len).collect::<Vec<_>>(), &mut |idx| {
                    let mut kids = Vec::new();
                    for (g, &ci) in idx.iter().enumerate() {
                        let list = &self.non_parallel[groups[g].0];
                        kids.extend(choices[g][ci].iter().map(|&i| list[i].clone()));
                    }
                    f(SpTerm::Parallel(kids).normalized())
                });
            }
        }
    }
}

/// Root structures for terms with `d` edges.
pub fn shards(d: usize) -> Vec<Shard> {
    let mut out = Vec::new();
    if d == 1 {
        out.push(Shard::Edge);
        return out;
    }
    // Compositions with at least two parts.
    fn compositions(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Shard>) {
        if rest == 0 {
            if cur.len() >= 2 {
                out.push(Shard::Series(cur.clone()));
            }
            return;
        }
        for w in 1..=rest {
            cur.push(w);
            compositions(rest - w, cur, out);
            cur.pop();
        }
    }
    compositions(d, &mut Vec::new(), &mut out);
    // Partitions with at least two parts, as (size, multiplicity) groups.
    fn partitions(rest: usize, max: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Shard>) {
        if rest == 0 {
            if cur.iter().map(|g| g.1).sum::<usize>() >= 2 {
                out.push(Shard::Parallel(cur.clone()));
            }
            return;
        }
        for w in (1..=max.min(rest)).rev() {
            for m in 1..=rest / w {
                cur.push((w, m));
                partitions(rest - w * m, w - 1, cur, out);
                cur.pop();
            }
        }
    }
    partitions(d, d, &mut Vec::new(), &mut out);
    out
}

fn odometer(radix: &[usize], f: &mut dyn FnMut(&[usize])) {
    if radix.contains(&0) {
        return;
    }
    let mut idx = vec![0; radix.len()];
    loop {
        f(&idx);
        let mut k = radix.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < radix[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn multisets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// A random term with `edges` leaves: a random split into two or three
/// parts under a root of random kind.
pub fn random_term<R: Rng + ?Sized>(edges: usize, rng: &mut R) -> SpTerm {
    assert!(edges >= 1, "terms have at least one edge");
    if edges == 1 {
        return SpTerm::Edge;
    }
    let parts = rng.gen_range(2..=edges.min(3));
    let mut cuts = rand::seq::index::sample(rng, edges - 1, parts - 1).into_vec();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut kids = Vec::with_capacity(parts);
    for c in cuts.into_iter().map(|c| c + 1).chain(std::iter::once(edges)) {
        kids.push(random_term(c - prev, rng));
        prev = c;
    }
    if rng.gen_bool(0.5) {
        SpTerm::series(kids)
    } else {
        SpTerm::parallel(kids)
    }
}

/// Whether an oriented normalised term is the representative of its class.
pub fn is_canonical_representative(t: &SpTerm) -> bool {
    let own = t.to_string();
    let flipped = t.flip().normalized().to_string();
    own <= flipped
}

/// One term per marked-graph isomorphism class, `d` edges, sorted by key.
pub fn enumerate_terms(d: usize) -> Vec<SpTerm> {
    enumerate_terms_with(d, Exec::default())
}

pub fn enumerate_terms_with(d: usize, exec: Exec) -> Vec<SpTerm> {
    assert!(d >= 1, "terms have at least one edge");
    let catalog = TermCatalog::below(d);
    let shards = shards(d);
    let mut all: Vec<(String, SpTerm)> = exec
        .map(&shards, |s| {
            let mut out = Vec::new();
            catalog.for_each_in_shard(s, &mut |t| {
                if is_canonical_representative(&t) {
                    out.push((t.to_string(), t));
                }
            });
            out
        })
        .into_iter()
        .flatten()
        .collect();
    all.sort_by(|a, b| a.0.cmp(&b.0));
    all.into_iter().map(|(_, t)| t).collect()
}

/// Connected series-parallel multigraphs with `d` edges up to isomorphism,
/// generated from K1 by the four elementary operations, sorted by certificate.
pub fn enumerate_connected_sp(d: usize) -> Vec<Multigraph> {
    enumerate_connected_sp_with(d, Exec::default())
}

pub fn enumerate_connected_sp_with(d: usize, exec: Exec) -> Vec<Multigraph> {
    let mut level: Vec<Multigraph> = vec![Multigraph::k1()];
    for _ in 0..d {
        let children: Vec<Vec<(CanonicalGraph, Multigraph)>> = exec.map(&level, |g| {
            let mut ops = Vec::new();
            for v in 0..g.vertex_count() {
                ops.push(Operation::LoopAdd(v));
                ops.push(Operation::LeafAdd(v));
            }
            for i in 0..g.edge_count() {
                ops.push(Operation::Duplicate(i));
                ops.push(Operation::Subdivide(i));
            }
            let mut seen = BTreeMap::new();
            for op in ops {
                let h = g.apply_operation(op).expect("operation on valid index");
                seen.entry(canonical_form(&h)).or_insert(h);
            }
            seen.into_iter().collect()
        });
        let mut next: BTreeMap<CanonicalGraph, Multigraph> = BTreeMap::new();
        for batch in children {
            for (k, g) in batch {
                next.entry(k).or_insert(g);
            }
        }
        level = next.into_values().collect();
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> SpTerm {
        s.parse().unwrap()
    }

    #[test]
    fn parse_print_round_trip() {
        for s in ["e", "S(e,e)", "P(e,S(e,P(e,e)),e)", "S(P(e,e),e,P(e,S(e,e)))"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert_eq!(t(" S( e , S(e,e) ) ").to_string(), "S(e,e,e)");
        assert!("S(e)".parse::<SpTerm>().is_err());
        assert!("S(e,e".parse::<SpTerm>().is_err());
        assert!("x".parse::<SpTerm>().is_err());
        assert!("e e".parse::<SpTerm>().is_err());
    }

    #[test]
    fn marked_graph_examples() {
        let c2 = SpTerm::Edge.to_marked_graph();
        assert_eq!((c2.vertex_count(), c2.edges().to_vec(), c2.distinguished()), (2, vec![(0, 1), (0, 1)], Some(0)));
        let tri = t("S(e,e)").to_marked_graph();
        assert_eq!((tri.vertex_count(), tri.edge_count()), (3, 3));
        assert!(tri.is_two_connected());
        let bond = t("P(e,e)").to_marked_graph();
        assert_eq!(bond, Multigraph::bond(3).with_distinguished(0).unwrap());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(SpTerm::Edge.dual(), SpTerm::Edge);
        assert_eq!(t("S(e,e)").dual(), t("P(e,e)"));
        let x = t("S(P(e,e),e,P(e,S(e,e)))");
        assert_eq!(x.dual().dual(), x);
    }

    #[test]
    fn canonical_key_examples() {
        assert_eq!(canonicalize(&t("P(e,S(e,e))")), canonicalize(&t("P(S(e,e),e)")));
        assert_eq!(canonicalize(&t("S(e,P(e,e))")), canonicalize(&t("S(P(e,e),e)")));
        assert_ne!(canonicalize(&t("S(e,e)")), canonicalize(&t("P(e,e)")));
        // Flipping one branch of a parallel node is not an isomorphism.
        assert_ne!(canonicalize(&t("P(S(e,P(e,e)),S(e,P(e,e,e)))")), canonicalize(&t("P(S(P(e,e),e),S(e,P(e,e,e)))")));
    }

    #[test]
    fn term_counts_small() {
        assert_eq!(enumerate_terms(1), vec![SpTerm::Edge]);
        assert_eq!(enumerate_terms(2).len(), 2);
        assert_eq!(enumerate_terms(3).len(), 4);
    }

    #[test]
    fn tf_count_examples() {
        assert_eq!(SpTerm::Edge.tf_counts(), (1, 1));
        assert_eq!(t("P(e,e)").tf_counts(), (2, 1));
        assert_eq!(t("S(e,e)").tf_counts(), (1, 2));
    }

    #[test]
    fn tree_sets_match_counts() {
        let x = t("S(P(e,e),e,P(e,S(e,e)))");
        let (ts, fs) = x.tree_sets().unwrap();
        assert_eq!((ts.len() as u128, fs.len() as u128), x.tf_counts());
    }

    #[test]
    fn connected_sp_small_levels() {
        assert_eq!(enumerate_connected_sp(0), vec![Multigraph::k1()]);
        assert_eq!(enumerate_connected_sp(1).len(), 2);
        // P3, C2, two loops at one vertex, an edge with a loop at one end.
        assert_eq!(enumerate_connected_sp(2).len(), 4);
    }

    #[test]
    fn shard_terms_have_the_right_size() {
        let cat = TermCatalog::below(6);
        for s in shards(6) {
            cat.for_each_in_shard(&s, &mut |x| assert_eq!(x.edge_count(), 6));
        }
    }
}
