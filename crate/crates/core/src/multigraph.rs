//! Labelled multigraphs with ordered edges.
//!
//! Loops and parallel edges are allowed. The position of an edge in
//! [`Multigraph::edges`] is its coordinate in every derived pattern string,
//! so every operation here documents where new edges land.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest edge count supported by the bitmask representation of edge subsets.
pub const MAX_EDGES: usize = 64;

/// Above this edge count spanning trees are enumerated by deletion-contraction
/// instead of filtering all `(v-1)`-subsets.
const SUBSET_FILTER_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    distinguished: Option<usize>,
}

/// A subset of the edges of a particular multigraph, bit `i` standing for edge `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSubset {
    len: usize,
    bits: u64,
}

impl EdgeSubset {
    pub fn new(len: usize, bits: u64) -> Self {
        debug_assert!(len <= MAX_EDGES);
        debug_assert!(len == 64 || bits >> len == 0);
        EdgeSubset { len, bits }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, edge: usize) -> bool {
        edge < self.len && self.bits >> edge & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

/// Orders subsets like their `0`/`1` strings, coordinate 0 first.
impl Ord for EdgeSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |s: &EdgeSubset| {
            if s.len == 0 {
                0
            } else {
                s.bits.reverse_bits() >> (64 - s.len)
            }
        };
        self.len.cmp(&other.len).then_with(|| {
            // Pad to a common width so that shorter strings do not reorder.
            key(self).cmp(&key(other))
        })
    }
}

impl PartialOrd for EdgeSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.contains(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinorMode {
    Contract,
    Delete,
}

/// The four elementary operations generating connected series-parallel graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operation {
    /// Append a loop at the vertex.
    LoopAdd(usize),
    /// Append a new vertex joined to the given one.
    LeafAdd(usize),
    /// Insert a parallel copy of edge `i` at position `i + 1`.
    Duplicate(usize),
    /// Replace edge `i` by a path of length two at positions `i` and `i + 1`.
    Subdivide(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeEnumeration {
    Subsets,
    DeletionContraction,
}

/// One block of a multigraph, relabelled locally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub graph: Multigraph,
    /// Original index of every local edge, increasing.
    pub edges: Vec<usize>,
    /// Original id of every local vertex.
    pub vertices: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    distinguished: Option<usize>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both already share a root.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.len() > MAX_EDGES {
            return Err(Error::SizeGuard(format!("{} edges exceed the supported maximum of {MAX_EDGES}", edges.len())));
        }
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexIndex { vertex: w, vertices: vertex_count });
                }
            }
        }
        Ok(Multigraph { vertex_count, edges, distinguished: None })
    }

    /// Marks `edge` as distinguished. The edge must be neither a loop nor a bridge.
    pub fn with_distinguished(mut self, edge: usize) -> Result<Self> {
        self.check_edge(edge)?;
        if self.is_loop(edge) {
            return Err(Error::LoopEdge(edge));
        }
        if self.is_bridge(edge) {
            return Err(Error::BridgeEdge(edge));
        }
        self.distinguished = Some(edge);
        Ok(self)
    }

    pub fn without_distinguished(mut self) -> Self {
        self.distinguished = None;
        self
    }

    /// The single vertex.
    pub fn k1() -> Self {
        Multigraph { vertex_count: 1, edges: vec![], distinguished: None }
    }

    /// Two vertices joined by `k` parallel edges.
    pub fn bond(k: usize) -> Self {
        Multigraph { vertex_count: 2, edges: vec![(0, 1); k], distinguished: None }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 1);
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Multigraph { vertex_count: n, edges, distinguished: None }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Multigraph { vertex_count: n, edges, distinguished: None }
    }

    /// K4 minus an edge, labelled as in the standard worked example: the
    /// missing edge joins the top and bottom vertices and `e5` is the diagonal.
    pub fn k4_minus_edge() -> Self {
        // 0 = left, 1 = right, 2 = top, 3 = bottom.
        let edges = vec![(2, 0), (1, 2), (3, 0), (1, 3), (0, 1)];
        Multigraph { vertex_count: 4, edges, distinguished: None }
    }

    /// Cycle of `k` parallel classes of sizes `sizes[0], …, sizes[k-1]`; class
    /// `i` joins vertices `i` and `i + 1 (mod k)`. For `k = 1` the class is a
    /// bunch of loops.
    pub fn parallel_class_cycle(sizes: &[usize]) -> Result<Self> {
        let k = sizes.len();
        if k == 0 || sizes.contains(&0) {
            return Err(Error::InvalidParameters("class sizes must be positive".into()));
        }
        let mut edges = Vec::new();
        for (i, &a) in sizes.iter().enumerate() {
            edges.extend(std::iter::repeat_n((i, (i + 1) % k), a));
        }
        Multigraph::new(k, edges)
    }

    /// Distinguished edge (index 0) joining vertices `0` and `k`, closing a
    /// path of `k` parallel classes; class `i` joins vertices `i` and `i + 1`.
    pub fn marked_parallel_class_cycle(sizes: &[usize]) -> Result<Self> {
        let k = sizes.len();
        if k == 0 || sizes.contains(&0) {
            return Err(Error::InvalidParameters("class sizes must be positive".into()));
        }
        let mut edges = vec![(0, k)];
        for (i, &a) in sizes.iter().enumerate() {
            edges.extend(std::iter::repeat_n((i, i + 1), a));
        }
        Multigraph::new(k + 1, edges)?.with_distinguished(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    pub fn is_loop(&self, i: usize) -> bool {
        let (u, v) = self.edges[i];
        u == v
    }

    fn check_edge(&self, i: usize) -> Result<()> {
        if i >= self.edges.len() {
            return Err(Error::EdgeIndex { index: i, edges: self.edges.len() });
        }
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count {
            return Err(Error::VertexIndex { vertex: v, vertices: self.vertex_count });
        }
        Ok(())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    /// Number of connected components; isolated vertices count.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut comps = self.vertex_count;
        for &(u, v) in &self.edges {
            if uf.union(u, v) {
                comps -= 1;
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count >= 1 && self.component_count() == 1
    }

    /// A non-loop edge whose removal separates its endpoints.
    pub fn is_bridge(&self, i: usize) -> bool {
        if self.is_loop(i) {
            return false;
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            if j != i {
                uf.union(u, v);
            }
        }
        let (u, v) = self.edges[i];
        uf.find(u) != uf.find(v)
    }

    /// At least two edges, no loops, connected, and connected after deleting any vertex.
    pub fn is_two_connected(&self) -> bool {
        if self.edges.len() < 2 || !self.is_connected() {
            return false;
        }
        if (0..self.edges.len()).any(|i| self.is_loop(i)) {
            return false;
        }
        (0..self.vertex_count).all(|x| {
            let mut uf = UnionFind::new(self.vertex_count);
            let mut comps = self.vertex_count - 1;
            for &(u, v) in &self.edges {
                if u != x && v != x && uf.union(u, v) {
                    comps -= 1;
                }
            }
            comps <= 1
        })
    }

    /// Spanning trees as edge subsets, sorted in string order.
    pub fn spanning_trees(&self) -> Result<Vec<EdgeSubset>> {
        let strategy = if self.edges.len() <= SUBSET_FILTER_LIMIT {
            TreeEnumeration::Subsets
        } else {
            TreeEnumeration::DeletionContraction
        };
        self.spanning_trees_by(strategy)
    }

    /// Number of spanning trees by the matrix-tree theorem, without listing them.
    pub fn spanning_tree_count(&self) -> Result<u128> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = self.vertex_count - 1;
        let mut a = vec![vec![BigInt::zero(); n]; n];
        for &(u, v) in &self.edges {
            if u == v {
                continue;
            }
            for (x, y) in [(u, v), (v, u)] {
                if x < n {
                    a[x][x] += 1;
                    if y < n {
                        a[x][y] -= 1;
                    }
                }
            }
        }
        // Fraction-free elimination; the last pivot is the determinant.
        let mut prev = BigInt::from(1);
        let mut sign = 1i32;
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return Ok(0);
                };
                a.swap(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        (prev * sign).to_u128().ok_or_else(|| Error::SizeGuard("spanning tree count exceeds u128".into()))
    }

    pub fn spanning_trees_by(&self, strategy: TreeEnumeration) -> Result<Vec<EdgeSubset>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let m = self.edges.len();
        let mut trees = match strategy {
            TreeEnumeration::Subsets => self.trees_by_subsets(),
            TreeEnumeration::DeletionContraction => {
                let work: Vec<(usize, usize, usize)> =
                    self.edges.iter().enumerate().map(|(i, &(u, v))| (u, v, i)).collect();
                let mut out = Vec::new();
                trees_by_deletion_contraction(self.vertex_count, work, 0, &mut out);
                out
            }
        };
        trees.sort_unstable_by_key(|&b| EdgeSubset::new(m, b));
        Ok(trees.into_iter().map(|b| EdgeSubset::new(m, b)).collect())
    }

    fn trees_by_subsets(&self) -> Vec<u64> {
        let m = self.edges.len();
        let k = self.vertex_count - 1;
        if k > m {
            return vec![];
        }
        if k == 0 {
            return vec![0];
        }
        let mut out = Vec::new();
        let limit: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let mut subset: u64 = u64::MAX >> (64 - k);
        loop {
            let mut uf = UnionFind::new(self.vertex_count);
            let acyclic = (0..m).filter(|&i| subset >> i & 1 == 1).all(|i| uf.union(self.edges[i].0, self.edges[i].1));
            if acyclic {
                out.push(subset);
            }
            // Gosper's hack: next subset with the same popcount.
            let c = subset & subset.wrapping_neg();
            let r = subset.wrapping_add(c);
            if r == 0 || r > limit {
                break;
            }
            let next = (((r ^ subset) >> 2) / c) | r;
            if next > limit {
                break;
            }
            subset = next;
        }
        out
    }

    /// Deletes or contracts edge `i`; the remaining edges keep their relative order.
    /// Contraction keeps the lower endpoint id and shifts higher ids down by one.
    pub fn minor(&self, i: usize, mode: MinorMode) -> Result<Multigraph> {
        self.check_edge(i)?;
        let shift_edge = |j: usize| if j > i { j - 1 } else { j };
        let distinguished = match self.distinguished {
            Some(d) if d == i => None,
            Some(d) => Some(shift_edge(d)),
            None => None,
        };
        match mode {
            MinorMode::Delete => {
                let mut edges = self.edges.clone();
                edges.remove(i);
                Ok(Multigraph { vertex_count: self.vertex_count, edges, distinguished })
            }
            MinorMode::Contract => {
                let (a, b) = self.edges[i];
                if a == b {
                    return Err(Error::LoopEdge(i));
                }
                let (keep, gone) = (a.min(b), a.max(b));
                let relabel = |w: usize| match w.cmp(&gone) {
                    Ordering::Less => w,
                    Ordering::Equal => keep,
                    Ordering::Greater => w - 1,
                };
                let edges = self
                    .edges
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &(u, v))| (relabel(u), relabel(v)))
                    .collect();
                Ok(Multigraph { vertex_count: self.vertex_count - 1, edges, distinguished })
            }
        }
    }

    pub fn apply_operation(&self, op: Operation) -> Result<Multigraph> {
        let mut g = self.clone();
        match op {
            Operation::LoopAdd(v) => {
                self.check_vertex(v)?;
                g.edges.push((v, v));
            }
            Operation::LeafAdd(v) => {
                self.check_vertex(v)?;
                g.edges.push((v, g.vertex_count));
                g.vertex_count += 1;
            }
            Operation::Duplicate(i) | Operation::Subdivide(i) => {
                self.check_edge(i)?;
                if self.distinguished == Some(i) {
                    return Err(Error::DistinguishedEdge(i));
                }
                if let Some(d) = g.distinguished.as_mut() {
                    if *d > i {
                        *d += 1;
                    }
                }
                let (u, v) = self.edges[i];
                if let Operation::Duplicate(_) = op {
                    g.edges.insert(i + 1, (u, v));
                } else {
                    let w = g.vertex_count;
                    g.vertex_count += 1;
                    g.edges[i] = (u, w);
                    g.edges.insert(i + 1, (w, v));
                }
            }
        }
        if g.edges.len() > MAX_EDGES {
            return Err(Error::SizeGuard(format!("more than {MAX_EDGES} edges")));
        }
        Ok(g)
    }

    /// Block decomposition. Bridges and loops are single-edge blocks; blocks
    /// are ordered by their smallest edge index.
    pub fn blocks(&self) -> Vec<Block> {
        let n = self.vertex_count;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if u == v {
                groups.push(vec![i]);
            } else {
                adj[u].push((v, i));
                adj[v].push((u, i));
            }
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut time = 0;
        let mut stack: Vec<usize> = Vec::new();
        for root in 0..n {
            if disc[root] == usize::MAX {
                self.tarjan(root, usize::MAX, &adj, &mut disc, &mut low, &mut time, &mut stack, &mut groups);
            }
        }
        let mut blocks: Vec<Block> = groups
            .into_iter()
            .map(|mut ids| {
                ids.sort_unstable();
                let mut vertices: Vec<usize> = ids.iter().flat_map(|&i| [self.edges[i].0, self.edges[i].1]).collect();
                vertices.sort_unstable();
                vertices.dedup();
                let local = |w: usize| vertices.binary_search(&w).unwrap();
                let edges = ids.iter().map(|&i| (local(self.edges[i].0), local(self.edges[i].1))).collect();
                let graph = Multigraph { vertex_count: vertices.len(), edges, distinguished: None };
                Block { graph, edges: ids, vertices }
            })
            .collect();
        blocks.sort_by_key(|b| b.edges[0]);
        blocks
    }

    #[allow(clippy::too_many_arguments)]
    fn tarjan(
        &self,
        v: usize,
        parent_edge: usize,
        adj: &[Vec<(usize, usize)>],
        disc: &mut [usize],
        low: &mut [usize],
        time: &mut usize,
        stack: &mut Vec<usize>,
        groups: &mut Vec<Vec<usize>>,
    ) {
        disc[v] = *time;
        low[v] = *time;
        *time += 1;
        for &(w, e) in &adj[v] {
            if e == parent_edge {
                continue;
            }
            if disc[w] == usize::MAX {
                stack.push(e);
                self.tarjan(w, e, adj, disc, low, time, stack, groups);
                low[v] = low[v].min(low[w]);
                if low[w] >= disc[v] {
                    let mut group = Vec::new();
                    while let Some(f) = stack.pop() {
                        group.push(f);
                        if f == e {
                            break;
                        }
                    }
                    groups.push(group);
                }
            } else if disc[w] < disc[v] {
                stack.push(e);
                low[v] = low[v].min(disc[w]);
            }
        }
    }

    /// True iff the multigraph has no K4 minor, decided by exhaustive
    /// reduction: loops are dropped, parallel edges merged, vertices of degree
    /// at most one removed and vertices of degree two suppressed.
    pub fn is_series_parallel(&self) -> bool {
        let n = self.vertex_count;
        let mut mult = vec![vec![0usize; n]; n];
        for &(u, v) in &self.edges {
            if u != v {
                mult[u][v] = 1;
                mult[v][u] = 1;
            }
        }
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for v in 0..n {
                if !alive[v] {
                    continue;
                }
                let nbrs: Vec<usize> = (0..n).filter(|&w| alive[w] && mult[v][w] > 0).collect();
                match nbrs.len() {
                    0 | 1 => {
                        for &w in &nbrs {
                            mult[v][w] = 0;
                            mult[w][v] = 0;
                        }
                        alive[v] = false;
                        changed = true;
                    }
                    2 => {
                        let (a, b) = (nbrs[0], nbrs[1]);
                        mult[v][a] = 0;
                        mult[a][v] = 0;
                        mult[v][b] = 0;
                        mult[b][v] = 0;
                        mult[a][b] = 1;
                        mult[b][a] = 1;
                        alive[v] = false;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        !alive.iter().any(|&a| a)
    }

    /// 2-sum along the distinguished edges. The merged edge is kept, comes
    /// first and stays distinguished; then come the other edges of `self`,
    /// then those of `other`.
    pub fn two_sum(&self, other: &Multigraph) -> Result<Multigraph> {
        let d1 = self.distinguished.ok_or(Error::NoDistinguishedEdge)?;
        let d2 = other.distinguished.ok_or(Error::NoDistinguishedEdge)?;
        if self.is_loop(d1) {
            return Err(Error::LoopEdge(d1));
        }
        if other.is_loop(d2) {
            return Err(Error::LoopEdge(d2));
        }
        let (u1, v1) = self.edges[d1];
        let (u2, v2) = other.edges[d2];
        let mut map = vec![usize::MAX; other.vertex_count];
        map[u2] = u1;
        map[v2] = v1;
        let mut next = self.vertex_count;
        for slot in map.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        let mut edges = vec![(u1, v1)];
        edges.extend(self.edges.iter().enumerate().filter(|&(j, _)| j != d1).map(|(_, &e)| e));
        edges.extend(other.edges.iter().enumerate().filter(|&(j, _)| j != d2).map(|(_, &(a, b))| (map[a], map[b])));
        let mut g = Multigraph::new(next, edges)?;
        g.distinguished = Some(0);
        Ok(g)
    }

    /// 1-sum identifying vertex `v1` of `self` with `v2` of `other`. Edges of
    /// `self` come first; the distinguished edge of `self` is kept.
    pub fn one_sum(&self, v1: usize, other: &Multigraph, v2: usize) -> Result<Multigraph> {
        self.check_vertex(v1)?;
        other.check_vertex(v2)?;
        let map = |w: usize| match w.cmp(&v2) {
            Ordering::Equal => v1,
            Ordering::Less => self.vertex_count + w,
            Ordering::Greater => self.vertex_count + w - 1,
        };
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (map(a), map(b))));
        let mut g = Multigraph::new(self.vertex_count + other.vertex_count - 1, edges)?;
        g.distinguished = self.distinguished;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let j = GraphJson {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            distinguished: self.distinguished,
        };
        serde_json::to_string(&j).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let g = Multigraph::new(j.vertices, j.edges.into_iter().map(|[u, v]| (u, v)).collect())?;
        match j.distinguished {
            Some(d) => g.with_distinguished(d),
            None => Ok(g),
        }
    }
}

/// Deletion-contraction enumeration. `work` holds `(u, v, original index)`.
fn trees_by_deletion_contraction(n: usize, work: Vec<(usize, usize, usize)>, acc: u64, out: &mut Vec<u64>) {
    let work: Vec<_> = work.into_iter().filter(|&(u, v, _)| u != v).collect();
    if n == 1 {
        out.push(acc);
        return;
    }
    let Some(&(a, b, id)) = work.last() else {
        return;
    };
    let rest: Vec<_> = work[..work.len() - 1].to_vec();
    // Skip the deletion branch when the edge is a bridge.
    let mut uf = UnionFind::new(n);
    for &(u, v, _) in &rest {
        uf.union(u, v);
    }
    if uf.find(a) == uf.find(b) {
        trees_by_deletion_contraction(n, rest.clone(), acc, out);
    }
    let (keep, gone) = (a.min(b), a.max(b));
    let relabel = |w: usize| match w.cmp(&gone) {
        Ordering::Less => w,
        Ordering::Equal => keep,
        Ordering::Greater => w - 1,
    };
    let contracted = rest.into_iter().map(|(u, v, i)| (relabel(u), relabel(v), i)).collect();
    trees_by_deletion_contraction(n - 1, contracted, acc | 1 << id, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(g: &Multigraph) -> Vec<String> {
        g.spanning_trees().unwrap().iter().map(|s| s.to_string()).collect()
    }

    fn sorted(mut v: Vec<&str>) -> Vec<String> {
        v.sort();
        v.into_iter().map(String::from).collect()
    }

    #[test]
    fn worked_example_trees() {
        let g = Multigraph::k4_minus_edge();
        assert_eq!(strings(&g), sorted(vec!["01110", "10110", "11010", "11100", "01011", "01101", "10101", "10011"]));
        let c = g.minor(4, MinorMode::Contract).unwrap();
        assert_eq!(strings(&c), sorted(vec!["0101", "0110", "1001", "1010"]));
        let d = g.minor(4, MinorMode::Delete).unwrap();
        assert_eq!(strings(&d), sorted(vec!["0111", "1011", "1101", "1110"]));
    }

    #[test]
    fn small_tree_sets() {
        assert_eq!(strings(&Multigraph::bond(2)), vec!["01", "10"]);
        let loop1 = Multigraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(strings(&loop1), vec!["0"]);
        let disconnected = Multigraph::new(2, vec![]).unwrap();
        assert_eq!(disconnected.spanning_trees(), Err(Error::Disconnected));
    }

    #[test]
    fn contract_c2_gives_loop() {
        let g = Multigraph::bond(2).minor(0, MinorMode::Contract).unwrap();
        assert_eq!(g, Multigraph::new(1, vec![(0, 0)]).unwrap());
        assert_eq!(g.minor(0, MinorMode::Contract), Err(Error::LoopEdge(0)));
        assert!(matches!(g.minor(3, MinorMode::Delete), Err(Error::EdgeIndex { .. })));
    }

    #[test]
    fn elementary_operations() {
        let c2 = Multigraph::bond(2);
        let dup = c2.apply_operation(Operation::Duplicate(1)).unwrap();
        assert_eq!(strings(&dup), vec!["001", "010", "100"]);
        let sub = c2.apply_operation(Operation::Subdivide(1)).unwrap();
        assert_eq!(strings(&sub), vec!["011", "101", "110"]);
        let g = Multigraph::k1()
            .apply_operation(Operation::LeafAdd(0))
            .unwrap()
            .apply_operation(Operation::LoopAdd(1))
            .unwrap();
        assert_eq!(strings(&g), vec!["10"]);

        let marked = Multigraph::bond(2).with_distinguished(0).unwrap();
        assert_eq!(marked.apply_operation(Operation::Duplicate(0)), Err(Error::DistinguishedEdge(0)));
        let shifted = marked.apply_operation(Operation::Subdivide(1)).unwrap();
        assert_eq!(shifted.distinguished(), Some(0));
        let before = Multigraph::bond(3).with_distinguished(2).unwrap();
        assert_eq!(before.apply_operation(Operation::Duplicate(0)).unwrap().distinguished(), Some(3));
    }

    #[test]
    fn distinguished_must_not_be_bridge_or_loop() {
        let path = Multigraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(path.with_distinguished(0), Err(Error::BridgeEdge(0)));
        let lp = Multigraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(lp.with_distinguished(0), Err(Error::LoopEdge(0)));
    }

    #[test]
    fn block_examples() {
        let tri_leaf = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let b = tri_leaf.blocks();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].edges, vec![0, 1, 2]);
        assert_eq!(b[1].edges, vec![3]);

        assert_eq!(Multigraph::k4_minus_edge().blocks().len(), 1);

        let bowtie = Multigraph::new(5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let b = bowtie.blocks();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|blk| blk.graph.is_two_connected()));

        let with_loop = Multigraph::new(2, vec![(0, 1), (1, 1), (0, 1)]).unwrap();
        let b = with_loop.blocks();
        assert_eq!(b.iter().map(|x| x.edges.clone()).collect::<Vec<_>>(), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn series_parallel_examples() {
        assert!(Multigraph::k4_minus_edge().is_series_parallel());
        assert!(!Multigraph::complete(4).is_series_parallel());
        assert!(Multigraph::bond(3).is_series_parallel());
        assert!(!Multigraph::complete(5).is_series_parallel());
        assert!(Multigraph::k1().is_series_parallel());
    }

    #[test]
    fn two_sum_examples() {
        let c2 = Multigraph::bond(2).with_distinguished(0).unwrap();
        let theta = c2.two_sum(&c2).unwrap();
        assert_eq!((theta.vertex_count(), theta.edge_count()), (2, 3));
        assert_eq!(theta.distinguished(), Some(0));
        assert!(theta.is_two_connected());

        let c3 = Multigraph::cycle(3).with_distinguished(0).unwrap();
        let g = c3.two_sum(&c2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 4));
        let g = c2.two_sum(&c3).unwrap();
        assert_eq!(g.edge_count(), 4);

        let plain = Multigraph::bond(2);
        assert_eq!(plain.two_sum(&c2), Err(Error::NoDistinguishedEdge));
    }

    #[test]
    fn subset_order_is_string_order() {
        let a = EdgeSubset::new(3, 0b001); // "100"
        let b = EdgeSubset::new(3, 0b100); // "001"
        assert!(b < a);
        assert_eq!(a.to_string(), "100");
    }

    #[test]
    fn json_round_trip() {
        let g = Multigraph::k4_minus_edge().with_distinguished(4).unwrap();
        let back = Multigraph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        assert!(Multigraph::from_json(r#"{"vertices":1,"edges":[[0,3]]}"#).is_err());
    }
}
