//! Property suites over small instances. Each suite checks a family of
//! exact identities and reports every violation it finds.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{
    check_quotient_containment, density_lower_bound, f2_vertex_set, mean_vertex_density, vertex_set_from, F2Vectors,
};
use crate::embeddings::{contains_pattern, enumerate_maps, ex_layer, ex_layer_exhaustive, map_count};
use crate::error::Result;
use crate::exec::Exec;
use crate::multigraph::{MinorMode, Multigraph, Operation};
use crate::operators::{duplicate_e, duplicate_v, Duplication};
use crate::patterns::{
    dual_pattern, h_graph, k4_for_x16, k4_for_y18, layer_words, named_pattern, phi, product_join, psi, x_pattern,
    y_pattern, Kind, NamedSpec, Pattern, Word,
};
use crate::search::{check_m_bounds, fib, m_table_with, m_value_unrestricted, max_spanning_trees_with, witness_chain};
use crate::spterm::{enumerate_connected_sp_with, enumerate_terms_with, random_term, SpTerm};

/// Published values of `m(d)` for `d = 1..=14`.
pub const M_TABLE: [u128; 14] = [1, 2, 4, 8, 14, 24, 42, 72, 122, 204, 343, 576, 960, 1608];

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub violations: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}: {} cases, {} violations, {} ms",
            self.name,
            self.cases,
            self.violations.len(),
            self.elapsed.as_millis()
        )?;
        if let Some(v) = self.violations.first() {
            write!(f, " (first: {v})")?;
        }
        Ok(())
    }
}

struct Suite {
    name: String,
    cases: usize,
    violations: Vec<String>,
    start: Instant,
}

impl Suite {
    fn new(name: &str) -> Suite {
        Suite { name: name.to_string(), cases: 0, violations: Vec::new(), start: Instant::now() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    /// Records a case whose computation may itself fail.
    fn check_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => {
                let w = what();
                self.check(false, || format!("{w}: {e}"));
            }
        }
    }

    fn absorb(&mut self, outcomes: Vec<(usize, Vec<String>)>) {
        for (cases, violations) in outcomes {
            self.cases += cases;
            self.violations.extend(violations);
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport { name: self.name, cases: self.cases, violations: self.violations, elapsed: self.start.elapsed() }
    }
}

fn words(p: &Pattern) -> Vec<String> {
    p.words().iter().map(Word::to_string).collect()
}

fn terms_up_to(max_edges: usize, exec: Exec) -> Vec<SpTerm> {
    (1..=max_edges).flat_map(|d| enumerate_terms_with(d, exec)).collect()
}

/// Runs `f` on every item and gathers `(cases, violations)`.
fn per_item<T: Sync>(
    items: &[T],
    exec: Exec,
    f: impl Fn(&T, &mut Vec<String>) -> usize + Sync + Send,
) -> Vec<(usize, Vec<String>)> {
    exec.map(items, |t| {
        let mut v = Vec::new();
        let n = f(t, &mut v);
        (n, v)
    })
}

fn eq_or<T: PartialEq>(a: Result<T>, b: Result<T>, what: String, out: &mut Vec<String>) {
    match (a, b) {
        (Ok(x), Ok(y)) if x == y => {}
        (Ok(_), Ok(_)) => out.push(what),
        (Err(e), _) | (_, Err(e)) => out.push(format!("{what}: {e}")),
    }
}

/// The K4-minus-an-edge example: its tree sets and the 8-cycle `H(G, e_5)`.
pub fn worked_example() -> SuiteReport {
    let mut s = Suite::new("worked example");
    let g = Multigraph::k4_minus_edge();
    let expect = |ws: &[&str]| {
        let mut v: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        v.sort();
        v
    };
    let x = x_pattern(&g).map(|p| words(&p));
    s.check(
        x.as_ref().ok() == Some(&expect(&["01110", "10110", "11010", "11100", "01011", "01101", "10101", "10011"])),
        || format!("X(G) = {x:?}"),
    );
    let trees = |m: MinorMode| g.minor(4, m).and_then(|h| x_pattern(&h)).map(|p| words(&p));
    let contracted = trees(MinorMode::Contract);
    s.check(contracted.as_ref().ok() == Some(&expect(&["0101", "0110", "1001", "1010"])), || {
        format!("X(G/e5) = {contracted:?}")
    });
    let deleted = trees(MinorMode::Delete);
    s.check(deleted.as_ref().ok() == Some(&expect(&["1110", "1101", "1011", "0111"])), || {
        format!("X(G\\e5) = {deleted:?}")
    });
    let h = h_graph(&g, 4);
    s.check(h.as_ref().is_ok_and(|h| h.is_cycle() && h.vertex_count() == 8), || "H(G, e5) is not C8".into());
    s.finish()
}

/// `m(d)` for `d = 1..=d_max` against the published table, plus the bounds.
pub fn m_table_suite(d_max: usize, exec: Exec) -> SuiteReport {
    let mut s = Suite::new("m(d) table");
    match m_table_with(d_max, exec) {
        Ok(rows) => {
            for r in &rows {
                let expected = M_TABLE.get(r.d - 1).copied();
                s.check(expected.is_none_or(|m| m == r.value), || {
                    format!("m({}) = {} , expected {expected:?}", r.d, r.value)
                });
                if let crate::search::Witness::Term(t) = &r.witness {
                    let again = y_pattern(&t.to_marked_graph(), 0).map(|y| y.len() as u128);
                    s.check(again.as_ref().ok() == Some(&r.value), || format!("witness for d={} gives {again:?}", r.d));
                }
            }
            match check_m_bounds(&rows) {
                Ok(checks) => s.check(checks.len() == rows.len(), || "bounds report is incomplete".into()),
                Err(e) => s.check(false, || e.to_string()),
            }
        }
        Err(e) => s.check(false, || e.to_string()),
    }
    s.finish()
}

/// The unrestricted brute force agrees with the network search.
pub fn m_reduction_suite(d_max: usize, exec: Exec) -> SuiteReport {
    let mut s = Suite::new("m(d) over all connected graphs");
    for d in 1..=d_max {
        let v = m_value_unrestricted(d, exec);
        s.check(v.as_ref().ok() == Some(&M_TABLE[d - 1]), || format!("d={d}: {v:?}"));
    }
    s.finish()
}

/// Exhaustive spanning-tree maxima and the Fibonacci witness chain.
pub fn fibonacci_suite(exhaustive_max: usize, chain_max: usize, exec: Exec) -> SuiteReport {
    let mut s = Suite::new("spanning-tree maximum");
    for d in 0..=exhaustive_max {
        let r = max_spanning_trees_with(d, exec).map(|r| r.value);
        s.check(r.as_ref().ok() == Some(&fib(d + 1)), || format!("d={d}: {r:?}, expected {}", fib(d + 1)));
    }
    match witness_chain(chain_max) {
        Ok(rows) => {
            for r in &rows {
                s.check(r.value == fib(r.d + 1), || format!("chain d={}: {}", r.d, r.value));
                if r.d >= 2 {
                    s.check(r.value == rows[r.d - 1].value + rows[r.d - 2].value, || {
                        format!("recurrence fails at {}", r.d)
                    });
                }
                if let crate::search::Witness::Graph(g) = &r.witness {
                    s.check(g.is_series_parallel() && g.edge_count() == r.d, || format!("chain graph {} is off", r.d));
                }
            }
        }
        Err(e) => s.check(false, || e.to_string()),
    }
    s.finish()
}

/// Duplicating or subdividing an edge acts as `D_i` or `D'_i` on `X` and `Y`.
pub fn operator_suite(max_edges: usize, exec: Exec) -> SuiteReport {
    let mut s = Suite::new("operator correspondence");
    let terms = terms_up_to(max_edges, exec);
    s.absorb(per_item(&terms, exec, |t, out| {
        let g = t.to_marked_graph();
        let (Ok(x), Ok(y)) = (x_pattern(&g), y_pattern(&g, 0)) else {
            out.push(format!("{t}: patterns failed"));
            return 1;
        };
        let mut cases = 0;
        for i in 1..g.edge_count() {
            for (op, kind) in
                [(Operation::Duplicate(i), Duplication::D), (Operation::Subdivide(i), Duplication::DPrime)]
            {
                cases += 2;
                let h = match g.apply_operation(op) {
                    Ok(h) => h,
                    Err(e) => {
                        out.push(format!("{t} {op:?}: {e}"));
                        continue;
                    }
                };
                eq_or(x_pattern(&h), duplicate_v(&x, i, kind), format!("X: {t} {op:?}"), out);
                eq_or(y_pattern(&h, 0), duplicate_e(&y, i - 1, kind), format!("Y: {t} {op:?}"), out);
            }
        }
        cases
    }));
    // Unmarked graphs, every edge including loops and bridges.
    let graphs: Vec<Multigraph> = (1..max_edges).flat_map(|d| enumerate_connected_sp_with(d, exec)).collect();
    s.absorb(per_item(&graphs, exec, |g, out| {
        let Ok(x) = x_pattern(g) else {
            out.push("pattern failed".into());
            return 1;
        };
        let mut cases = 0;
        for i in 0..g.edge_count() {
            for (op, kind) in
                [(Operation::Duplicate(i), Duplication::D), (Operation::Subdivide(i), Duplication::DPrime)]
            {
                cases += 1;
                let lhs = g.apply_operation(op).and_then(|h| x_pattern(&h));
                eq_or(lhs, duplicate_v(&x, i, kind), format!("X: {} {op:?}", g.to_json()), out);
            }
        }
        cases
    }));
    s.finish()
}

/// Complementing patterns matches dualising terms, and swaps `D` with `D'`.
pub fn duality_suite(max_edges: usize, exec: Exec) -> SuiteReport {
    let mut s = Suite::new("duality");
    let terms = terms_up_to(max_edges, exec);
    s.absorb(per_item(&terms, exec, |t, out| {
        let g = t.to_marked_graph();
        let gd = t.dual().to_marked_graph();
        eq_or(x_pattern(&g).map(|p| dual_pattern(&p)), x_pattern(&gd), format!("X: {t}"), out);
        eq_or(y_pattern(&g, 0).map(|p| dual_pattern(&p)), y_pattern(&gd, 0), format!("Y: {t}"), out);
        let mut cases = 2;
        if let Ok(x) = x_pattern(&g) {
            for i in 0..x.word_len() {
                cases += 1;
                let lhs = duplicate_v(&x, i, Duplication::D).map(|p| dual_pattern(&p));
                let rhs = duplicate_v(&dual_pattern(&x), i, Duplication::DPrime);
                eq_or(lhs, rhs, format!("D/D' at {i}: {t}"), out);
            }
        }
        cases
    }));
    s.finish()
}

/// `H` of a 2-sum is the product-join of the two `H`s, string for string.
pub fn gluing_suite(pairs: usize, max_edges: usize, seed: u64) -> SuiteReport {
    let mut s = Suite::new("product-join gluing");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let total = rng.gen_range(2..=max_edges.max(2));
        let n1 = rng.gen_range(1..total);
        let t1 = random_term(n1, &mut rng);
        let t2 = random_term(total - n1, &mut rng);
        let (g1, g2) = (t1.to_marked_graph(), t2.to_marked_graph());
        let r = (|| -> Result<bool> {
            let glued = h_graph(&g1.two_sum(&g2)?, 0)?;
            let joined = product_join(&h_graph(&g1, 0)?, &h_graph(&g2, 0)?)?;
            Ok(glued == joined && glued.is_connected())
        })();
        s.check_result(r, || format!("{t1} with {t2}"));
    }
    s.finish()
}

/// Product-joins of 2-connected pattern graphs stay 2-connected.
pub fn two_connected_join_suite(max_edges: usize, exec: Exec) -> SuiteReport {
    let mut s = Suite::new("2-connected product-joins");
    let hs: Vec<_> = terms_up_to(max_edges, exec)
        .iter()
        .filter_map(|t| h_graph(&t.to_marked_graph(), 0).ok())
        .filter(|h| h.vertex_count() >= 3 && h.is_two_connected())
        .collect();
    for (i, a) in hs.iter().enumerate() {
        for b in hs.iter().skip(i) {
            let r = product_join(a, b).map(|p| p.is_two_connected());
            s.check_result(r, || format!("join of {} and {} vertices", a.vertex_count(), b.vertex_count()));
        }
    }
    s.finish()
}

/// `Phi(Y(G, e)) = X(G)` with the marked coordinate last, and `Psi_e(X(G)) = Y(G, e)`.
pub fn phi_psi_suite(max_edges: usize, exec: Exec) -> SuiteReport {
    let mut s = Suite::new("phi and psi");
    let terms = terms_up_to(max_edges, exec);
    s.absorb(per_item(&terms, exec, |t, out| {
        let g = t.to_marked_graph();
        let d = t.edge_count();
        let x = x_pattern(&g);
        let y = y_pattern(&g, 0);
        eq_or(
            y.clone().and_then(|y| phi(&y)),
            x.clone().and_then(|x| x.move_coordinate(0, d)),
            format!("phi: {t}"),
            out,
        );
        eq_or(x.and_then(|x| psi(&x, 0)), y, format!("psi: {t}"), out);
        2
    }));
    s.finish()
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Named families against the graphs they come from.
pub fn named_suite(max_total: usize) -> SuiteReport {
    let mut s = Suite::new("named patterns");
    for n in 1..=max_total {
        for sizes in compositions(n) {
            let alon = named_pattern(&NamedSpec::Alon(sizes.clone())).map(|p| p.pattern);
            let xg = Multigraph::parallel_class_cycle(&sizes).and_then(|g| x_pattern(&g));
            s.check(alon.is_ok() && alon.as_ref().ok() == xg.as_ref().ok(), || format!("alon {sizes:?}"));
            let partite = named_pattern(&NamedSpec::Partite(sizes.clone())).map(|p| p.pattern);
            let yg = Multigraph::marked_parallel_class_cycle(&sizes).and_then(|g| y_pattern(&g, 0));
            s.check(partite.is_ok() && partite.as_ref().ok() == yg.as_ref().ok(), || format!("partite {sizes:?}"));
        }
    }
    let x16 = named_pattern(&NamedSpec::X16).map(|p| p.pattern);
    let removed = ["010101", "011010", "100110", "101001"];
    let expect: Vec<String> = layer_words(Kind::Vertex, 3, 3)
        .unwrap()
        .iter()
        .map(Word::to_string)
        .filter(|w| !removed.contains(&w.as_str()))
        .collect();
    s.check(x16.as_ref().is_ok_and(|p| words(p) == expect && p.len() == 16), || "x16 is not L33 minus four".into());
    s.check(x16.as_ref().ok() == x_pattern(&k4_for_x16()).as_ref().ok(), || "x16 differs from X(K4)".into());
    let y18 = named_pattern(&NamedSpec::Y18).map(|p| p.pattern);
    s.check(y18.as_ref().is_ok_and(|p| p.len() == 18), || "y18 does not have 18 edges".into());
    s.check(y18.as_ref().ok() == y_pattern(&k4_for_y18(), 0).as_ref().ok(), || "y18 differs from Y(K4, e)".into());
    s.finish()
}

/// The vertex construction avoids the middle layer of `Q_4`, has the
/// expected density, and its `b = 2` embeddings factor through a quotient.
pub fn f2_suite(avoid_seeds: u64, density_trials: usize, exec: Exec) -> SuiteReport {
    let mut s = Suite::new("GF(2) construction");
    let middle = Pattern::full_layer(Kind::Vertex, 2, 2).unwrap();
    for seed in 0..avoid_seeds {
        let r = f2_vertex_set(4, 4, seed).and_then(|set| contains_pattern(&set, &middle)).map(|w| w.is_none());
        s.check_result(r, || format!("seed {seed} contains the middle layer"));
    }
    let bound = density_lower_bound(8);
    let bound = bound.to_f64().unwrap_or(f64::NAN);
    let mean = mean_vertex_density(8, 8, 0, density_trials, exec);
    s.check(mean.as_ref().is_ok_and(|m| (m - bound).abs() <= 0.05), || format!("mean {mean:?} vs {bound}"));
    for b in 1..=64 {
        let v = density_lower_bound(b).to_f64().unwrap_or(f64::NAN);
        s.check(v > 0.2887, || format!("bound at b'={b} is {v}"));
    }
    let x = x_pattern(&Multigraph::cycle(3)).unwrap();
    for seed in 0..avoid_seeds {
        let Ok(v) = F2Vectors::random(3, 7, seed) else { continue };
        let Ok(set) = vertex_set_from(&v, 4, 3) else { continue };
        if let Ok(Some(map)) = contains_pattern(&set, &x) {
            s.check_result(check_quotient_containment(&v, &map, &x), || format!("quotient check, seed {seed}"));
        }
    }
    s.finish()
}

/// Enumerated map counts against the factorial formula.
pub fn embedding_count_suite(max: usize) -> SuiteReport {
    let mut s = Suite::new("embedding counts");
    for a2 in 0..=max {
        for b2 in 0..=max {
            for a in 0..=a2 {
                for b in 0..=b2 {
                    for starred in [false, true] {
                        let r = enumerate_maps(a, b, a2, b2, starred).map(|maps| {
                            let distinct: std::collections::HashSet<_> = maps.iter().collect();
                            distinct.len() == maps.len()
                                && num_bigint::BigInt::from(maps.len()) == map_count(a, b, a2, b2, starred)
                        });
                        s.check_result(r, || format!("P({a},{b},{a2},{b2}) starred={starred}"));
                    }
                }
            }
        }
    }
    s.finish()
}

/// Small extremal numbers, and branch and bound against plain enumeration.
pub fn extremal_suite(random_patterns: usize, seed: u64) -> SuiteReport {
    let mut s = Suite::new("extremal oracles");
    let xc2 = x_pattern(&Multigraph::bond(2)).unwrap();
    let e11 = ex_layer(1, 1, &xc2);
    s.check(e11.as_ref().is_ok_and(|e| e.value == 1), || format!("ex(L11) = {e11:?}"));
    let e22 = ex_layer(2, 2, &xc2);
    s.check(
        e22.as_ref().is_ok_and(|e| {
            e.value == 2 && e.witness.iter().map(Word::to_string).collect::<Vec<_>>() == ["0011", "1100"]
        }),
        || format!("ex(L22) = {e22:?}"),
    );
    let mut layers = Vec::new();
    for kind in [Kind::Vertex, Kind::Edge] {
        for a2 in 0..=16 {
            for b2 in 0..=16 {
                let binom = (1..=b2).fold(1u128, |acc, k| acc * (a2 + k) as u128 / k as u128);
                let size = binom * if kind == Kind::Edge { (a2 + b2 + 1) as u128 } else { 1 };
                if (2..=16).contains(&size) {
                    layers.push((kind, a2, b2));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < random_patterns {
        let (kind, a2, b2) = layers[rng.gen_range(0..layers.len())];
        let a = rng.gen_range(0..=a2);
        let b = rng.gen_range(0..=b2);
        if (kind == Kind::Vertex && a + b == 0) || map_count(a, b, a2, b2, kind == Kind::Edge) > 200_000.into() {
            continue;
        }
        let all = layer_words(kind, a, b).unwrap();
        let picked: Vec<Word> = all.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if picked.is_empty() {
            continue;
        }
        done += 1;
        let x = Pattern::new(kind, a, b, picked).unwrap();
        let fast = ex_layer(a2, b2, &x);
        let slow = ex_layer_exhaustive(a2, b2, &x);
        let label = format!("{} ({a},{b}) -> ({a2},{b2}): {:?}", kind.name(), words(&x));
        s.check(fast.is_ok() && fast.as_ref().ok() == slow.as_ref().ok(), || format!("{label}: {fast:?} vs {slow:?}"));
    }
    s.finish()
}

/// Every suite, at the sizes used for reproduction runs when `full`, or
/// at smaller sizes otherwise.
pub fn run_all(full: bool, exec: Exec) -> Vec<SuiteReport> {
    let (terms, m_max) = if full { (8, 12) } else { (6, 9) };
    vec![
        worked_example(),
        m_table_suite(m_max, exec),
        m_reduction_suite(if full { 6 } else { 4 }, exec),
        fibonacci_suite(if full { 8 } else { 6 }, 16, exec),
        operator_suite(terms, exec),
        duality_suite(terms, exec),
        gluing_suite(200, 10, 1),
        two_connected_join_suite(if full { 5 } else { 4 }, exec),
        phi_psi_suite(terms, exec),
        named_suite(7),
        f2_suite(if full { 50 } else { 10 }, if full { 100 } else { 20 }, exec),
        embedding_count_suite(3),
        extremal_suite(20, 7),
    ]
}
