//! Reproduction checks. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use spcube::constructions::{density_lower_bound, f2_vertex_set, mean_vertex_density};
use spcube::embeddings::contains_pattern;
use spcube::patterns::{h_graph, x_pattern, y_pattern};
use spcube::search::{check_m_bounds, fib, m_table_with, max_spanning_trees_with, witness_chain, TableRow};
use spcube::verify::{self, SuiteReport, M_TABLE};
use spcube::{Exec, Kind, MinorMode, Multigraph, Pattern};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn from_suite(r: SuiteReport) -> Outcome {
    outcome(r.passed(), r.to_string())
}

fn strings(p: &Pattern) -> Vec<String> {
    let mut v: Vec<String> = p.words().iter().map(|w| w.to_string()).collect();
    v.sort();
    v
}

fn sorted(ws: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = ws.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

fn worked_example() -> Outcome {
    let g = Multigraph::k4_minus_edge();
    let x = strings(&x_pattern(&g).unwrap());
    let lower = strings(&x_pattern(&g.minor(4, MinorMode::Contract).unwrap()).unwrap());
    let upper = strings(&x_pattern(&g.minor(4, MinorMode::Delete).unwrap()).unwrap());
    let h = h_graph(&g, 4).unwrap();
    let y = strings(&y_pattern(&g, 4).unwrap());
    let ok = x == sorted(&["01110", "10110", "11010", "11100", "01011", "01101", "10101", "10011"])
        && lower == sorted(&["0101", "0110", "1001", "1010"])
        && upper == sorted(&["0111", "1011", "1101", "1110"])
        && h.is_cycle()
        && h.vertex_count() == 8
        && y == sorted(&["01*1", "011*", "*110", "1*10", "101*", "10*1", "1*01", "*101"]);
    outcome(ok, format!("|X(G)| = {}, H(G, e5) = {}", x.len(), h.summary()))
}

fn table(rows: &[TableRow], elapsed: Duration) -> Outcome {
    let values: Vec<u128> = rows.iter().map(|r| r.value).collect();
    let ok = values == M_TABLE[..12] && elapsed < Duration::from_secs(300);
    outcome(ok, format!("m(1..12) = {values:?} in {} ms single-threaded", elapsed.as_millis()))
}

fn fibonacci() -> Outcome {
    let exhaustive: Vec<u128> = (0..=8).map(|d| max_spanning_trees_with(d, Exec::default()).unwrap().value).collect();
    let chain = witness_chain(16).unwrap();
    let recurrence = chain.windows(3).all(|w| w[2].value == w[1].value + w[0].value);
    let ok = exhaustive == [1, 1, 2, 3, 5, 8, 13, 21, 34]
        && chain.iter().all(|r| r.value == fib(r.d + 1))
        && recurrence
        && chain[16].value == 1597;
    outcome(ok, format!("exhaustive {exhaustive:?}; chain reaches {} at d = 16", chain[16].value))
}

fn bounds(rows: &[TableRow]) -> Outcome {
    match check_m_bounds(rows) {
        Ok(checks) => outcome(true, format!("{} rows, e.g. {}", checks.len(), checks[4])),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn f2() -> Outcome {
    let middle = Pattern::full_layer(Kind::Vertex, 2, 2).unwrap();
    let avoiding =
        (0..50u64).filter(|&s| contains_pattern(&f2_vertex_set(4, 4, s).unwrap(), &middle).unwrap().is_none()).count();
    let mean = mean_vertex_density(8, 8, 0, 100, Exec::default()).unwrap();
    let bound = density_lower_bound(8).to_f64().unwrap();
    let ok = avoiding == 50 && (mean - bound).abs() <= 0.05;
    outcome(ok, format!("{avoiding}/50 seeds avoid L22; mean density {mean:.4} vs {bound:.4}"))
}

type Criterion<'a> = (&'a str, Duration, Box<dyn FnOnce() -> Outcome + 'a>);

fn main() -> ExitCode {
    let exec = Exec::default();
    let started = Instant::now();
    let m_start = Instant::now();
    let rows = m_table_with(12, Exec::Sequential).unwrap();
    let m_elapsed = m_start.elapsed();

    let criteria: Vec<Criterion> = vec![
        ("worked example", Duration::from_secs(1), Box::new(worked_example)),
        ("m(d) table", Duration::from_secs(300), Box::new(|| table(&rows, m_elapsed))),
        ("spanning-tree maximum", Duration::from_secs(120), Box::new(fibonacci)),
        ("m(d) bounds", Duration::from_secs(1), Box::new(|| bounds(&rows))),
        ("operator correspondence", Duration::MAX, Box::new(move || from_suite(verify::operator_suite(8, exec)))),
        ("duality", Duration::MAX, Box::new(move || from_suite(verify::duality_suite(8, exec)))),
        ("product-join gluing", Duration::MAX, Box::new(|| from_suite(verify::gluing_suite(200, 10, 2024)))),
        ("phi and psi", Duration::MAX, Box::new(move || from_suite(verify::phi_psi_suite(8, exec)))),
        ("named patterns", Duration::MAX, Box::new(|| from_suite(verify::named_suite(7)))),
        ("GF(2) construction", Duration::from_secs(60), Box::new(f2)),
        ("embedding counts", Duration::MAX, Box::new(|| from_suite(verify::embedding_count_suite(3)))),
        ("extremal oracles", Duration::MAX, Box::new(|| from_suite(verify::extremal_suite(20, 11)))),
    ];

    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let ok = out.ok && elapsed <= limit;
        if !ok {
            failed += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        let budget = if limit == Duration::MAX { String::new() } else { format!(", limit {} s", limit.as_secs()) };
        println!("[{status}] {:>2} {name}: {} ({} ms{budget})", i + 1, out.detail, elapsed.as_millis());
    }
    println!("acceptance: {} of 12 passed in {:.1} s", 12 - failed, started.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
