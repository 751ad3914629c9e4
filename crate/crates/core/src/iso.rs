//! Canonical labelling of small multigraphs.
//!
//! Colour refinement on the multiplicity matrix, then individualisation of
//! one vertex per twin class in the first non-singleton cell. The certificate
//! is the lexicographically least upper triangle over all leaves of the
//! search. A distinguished edge is a different edge colour, so marked graphs
//! are only identified by isomorphisms that respect the mark.

use crate::multigraph::Multigraph;

/// Weight of a distinguished edge in the multiplicity matrix.
const MARK: u32 = 1 << 16;

/// Isomorphism-invariant certificate; equal iff the graphs are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalGraph(Vec<u32>);

pub fn canonical_form(g: &Multigraph) -> CanonicalGraph {
    let n = g.vertex_count();
    let mut adj = vec![vec![0u32; n]; n];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let w = if g.distinguished() == Some(i) { MARK } else { 1 };
        adj[u][v] += w;
        if u != v {
            adj[v][u] += w;
        }
    }
    let colors = refine(&adj, vec![0; n]);
    let mut best: Option<Vec<u32>> = None;
    search(&adj, colors, &mut best);
    let mut cert = vec![n as u32];
    cert.extend(best.unwrap_or_default());
    CanonicalGraph(cert)
}

pub fn are_isomorphic(g: &Multigraph, h: &Multigraph) -> bool {
    g.vertex_count() == h.vertex_count() && g.edge_count() == h.edge_count() && canonical_form(g) == canonical_form(h)
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Own color, loop weight, and sorted neighbor colors with multiplicities.
type Signature = (u32, u32, Vec<(u32, u32)>);

fn refine(adj: &[Vec<u32>], mut colors: Vec<u32>) -> Vec<u32> {
    let n = adj.len();
    let mut classes = distinct(&colors);
    loop {
        let sigs: Vec<Signature> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u32)> =
                    (0..n).filter(|&w| w != v && adj[v][w] > 0).map(|w| (colors[w], adj[v][w])).collect();
                nb.sort_unstable();
                (colors[v], adj[v][v], nb)
            })
            .collect();
        colors = rank(&sigs);
        let now = distinct(&colors);
        if now == classes {
            return colors;
        }
        classes = now;
    }
}

fn twins(adj: &[Vec<u32>], u: usize, v: usize) -> bool {
    adj[u][u] == adj[v][v] && (0..adj.len()).all(|w| w == u || w == v || adj[u][w] == adj[v][w])
}

fn search(adj: &[Vec<u32>], colors: Vec<u32>, best: &mut Option<Vec<u32>>) {
    let n = adj.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    let Some(target) = (0..n as u32).find(|&c| counts[c as usize] > 1) else {
        let mut order = vec![0usize; n];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        let mut cert = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                cert.push(adj[order[i]][order[j]]);
            }
        }
        if best.as_ref().is_none_or(|b| cert < *b) {
            *best = Some(cert);
        }
        return;
    };
    let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cell {
        if tried.iter().any(|&u| twins(adj, u, v)) {
            continue;
        }
        tried.push(v);
        let keys: Vec<(u32, bool)> = (0..n).map(|w| (colors[w], !(w == v))).collect();
        let split = rank(&keys);
        search(adj, refine(adj, split), best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relabel(g: &Multigraph, perm: &[usize]) -> Multigraph {
        let edges = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Multigraph::new(g.vertex_count(), edges).unwrap()
    }

    #[test]
    fn relabelled_graphs_share_a_form() {
        let g = Multigraph::k4_minus_edge();
        let h = relabel(&g, &[3, 1, 0, 2]);
        assert!(are_isomorphic(&g, &h));
        let c6 = Multigraph::cycle(6);
        let two_triangles = Multigraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!are_isomorphic(&c6, &two_triangles));
    }

    #[test]
    fn multiplicities_and_loops_matter() {
        let a = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        let b = Multigraph::new(3, vec![(0, 1), (1, 2), (1, 2)]).unwrap();
        let c = Multigraph::new(3, vec![(0, 1), (0, 1), (0, 2)]).unwrap();
        assert!(are_isomorphic(&a, &b));
        assert!(are_isomorphic(&a, &c));
        let d = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 0)]).unwrap();
        let e = Multigraph::new(3, vec![(0, 1), (1, 2), (1, 1)]).unwrap();
        assert!(!are_isomorphic(&d, &e));
    }

    #[test]
    fn marks_are_respected() {
        // Triangle with one doubled edge; the mark on a doubled edge differs
        // from a mark on a single edge.
        let g = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        let on_double = g.clone().with_distinguished(0).unwrap();
        let on_double2 = g.clone().with_distinguished(1).unwrap();
        let on_single = g.clone().with_distinguished(2).unwrap();
        let on_single2 = g.with_distinguished(3).unwrap();
        assert!(are_isomorphic(&on_double, &on_double2));
        assert!(are_isomorphic(&on_single, &on_single2));
        assert!(!are_isomorphic(&on_double, &on_single));
    }

    #[test]
    fn stars_are_cheap() {
        let star = Multigraph::new(9, (1..9).map(|i| (0, i)).collect()).unwrap();
        let star2 = relabel(&star, &[4, 0, 1, 2, 3, 5, 6, 7, 8]);
        assert!(are_isomorphic(&star, &star2));
    }
}
