//! Layer patterns: sets of vertices or edges of a hypercube lying in one layer.
//!
//! A vertex is a `0`/`1` string; an edge is a string with exactly one `*`
//! marking its direction. `L_{a,b}` holds the strings with `a` zeros and `b`
//! ones, `L'_{a,b}` the starred strings with `a` zeros and `b` ones.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::multigraph::{MinorMode, Multigraph, UnionFind};

/// Longest supported string.
pub const MAX_LEN: usize = 64;

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Removes bit `i`, shifting higher bits down.
pub(crate) fn remove_bit(x: u64, i: usize) -> u64 {
    (x & low_mask(i)) | ((x >> i >> 1) << i)
}

/// Inserts `bit` at position `i`, shifting bits at `i` and above up.
pub(crate) fn insert_bit(x: u64, i: usize, bit: bool) -> u64 {
    (x & low_mask(i)) | ((bit as u64) << i) | ((x >> i) << i << 1)
}

/// A string over `{0, 1, *}` with at most one `*`; character `i` is bit `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    len: u8,
    ones: u64,
    star: Option<u8>,
}

impl Word {
    pub fn vertex(len: usize, ones: u64) -> Word {
        debug_assert!(len <= MAX_LEN && ones & !low_mask(len) == 0);
        Word { len: len as u8, ones, star: None }
    }

    pub fn edge(len: usize, ones: u64, star: usize) -> Word {
        debug_assert!(star < len && ones >> star & 1 == 0);
        Word { len: len as u8, ones, star: Some(star as u8) }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }

    pub fn star(&self) -> Option<usize> {
        self.star.map(usize::from)
    }

    pub fn is_edge(&self) -> bool {
        self.star.is_some()
    }

    pub fn weight(&self) -> usize {
        self.ones.count_ones() as usize
    }

    pub fn zero_count(&self) -> usize {
        self.len() - self.weight() - self.star.is_some() as usize
    }

    pub fn char_at(&self, i: usize) -> char {
        if self.star() == Some(i) {
            '*'
        } else if self.ones >> i & 1 == 1 {
            '1'
        } else {
            '0'
        }
    }

    fn rank_at(&self, i: usize) -> u8 {
        match self.char_at(i) {
            '0' => 0,
            '1' => 1,
            _ => 2,
        }
    }

    /// Endpoint with the star read as `0`.
    pub fn lower(&self) -> Word {
        Word::vertex(self.len(), self.ones)
    }

    /// Endpoint with the star read as `1`.
    pub fn upper(&self) -> Word {
        let s = self.star.map_or(0, |s| 1u64 << s);
        Word::vertex(self.len(), self.ones | s)
    }

    /// Deletes character `i`.
    pub fn remove(&self, i: usize) -> Word {
        let star = match self.star() {
            Some(s) if s == i => None,
            Some(s) if s > i => Some(s - 1),
            other => other,
        };
        Word { len: self.len - 1, ones: remove_bit(self.ones, i), star: star.map(|s| s as u8) }
    }

    /// Inserts character `c` (`'0'`, `'1'` or `'*'`) at position `i`.
    pub fn insert(&self, i: usize, c: char) -> Word {
        let star = match (self.star(), c) {
            (_, '*') => Some(i),
            (Some(s), _) if s >= i => Some(s + 1),
            (s, _) => s,
        };
        Word { len: self.len + 1, ones: insert_bit(self.ones, i, c == '1'), star: star.map(|s| s as u8) }
    }

    /// Swaps `0` and `1`, keeping the star.
    pub fn complement(&self) -> Word {
        let s = self.star.map_or(0, |s| 1u64 << s);
        Word { len: self.len, ones: !self.ones & low_mask(self.len()) & !s, star: self.star }
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert!(self.star.is_none() || other.star.is_none());
        let star = self.star.or(other.star.map(|s| s + self.len));
        Word { len: self.len + other.len, ones: self.ones | other.ones << self.len, star }
    }
}

/// Length first, then lexicographic with `0 < 1 < *`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            let sa = self.star.map_or(0, |s| 1u64 << s);
            let sb = other.star.map_or(0, |s| 1u64 << s);
            let diff = (self.ones ^ other.ones) | (sa ^ sb);
            if diff == 0 {
                Ordering::Equal
            } else {
                let i = diff.trailing_zeros() as usize;
                self.rank_at(i).cmp(&other.rank_at(i))
            }
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len()).map(|i| self.char_at(i)).collect();
        f.write_str(&s)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        if s.len() > MAX_LEN {
            return Err(Error::SizeGuard(format!("string longer than {MAX_LEN}")));
        }
        let mut ones = 0u64;
        let mut star = None;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => ones |= 1 << i,
                '*' if star.is_none() => star = Some(i as u8),
                _ => return Err(Error::Parse(format!("bad character {c:?} in {s:?}"))),
            }
        }
        Ok(Word { len: s.len() as u8, ones, star })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Vertex,
    Edge,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Vertex => "vertex",
            Kind::Edge => "edge",
        }
    }
}

/// A subset of `L_{a,b}` (vertex kind) or `L'_{a,b}` (edge kind).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    kind: Kind,
    zeros: usize,
    ones: usize,
    words: BTreeSet<Word>,
}

impl Pattern {
    pub fn new(kind: Kind, zeros: usize, ones: usize, words: impl IntoIterator<Item = Word>) -> Result<Pattern> {
        let len = zeros + ones + (kind == Kind::Edge) as usize;
        if len > MAX_LEN {
            return Err(Error::SizeGuard(format!("strings of length {len} exceed {MAX_LEN}")));
        }
        let words: BTreeSet<Word> = words.into_iter().collect();
        for w in &words {
            if w.len() != len || w.weight() != ones || w.is_edge() != (kind == Kind::Edge) {
                return Err(Error::Layer(format!("{w} is not in the {} layer ({zeros}, {ones})", kind.name())));
            }
        }
        Ok(Pattern { kind, zeros, ones, words })
    }

    pub fn empty(kind: Kind, zeros: usize, ones: usize) -> Pattern {
        Pattern { kind, zeros, ones, words: BTreeSet::new() }
    }

    /// The whole layer.
    pub fn full_layer(kind: Kind, zeros: usize, ones: usize) -> Result<Pattern> {
        Pattern::new(kind, zeros, ones, layer_words(kind, zeros, ones)?)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn zeros(&self) -> usize {
        self.zeros
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    pub fn word_len(&self) -> usize {
        self.zeros + self.ones + (self.kind == Kind::Edge) as usize
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn is_subset(&self, other: &Pattern) -> bool {
        self.words.is_subset(&other.words)
    }

    /// Moves coordinate `from` to position `to` in every string.
    pub fn move_coordinate(&self, from: usize, to: usize) -> Result<Pattern> {
        let len = self.word_len();
        for c in [from, to] {
            if c >= len {
                return Err(Error::Coordinate { coord: c, len });
            }
        }
        let words = self.words.iter().map(|w| {
            let c = w.char_at(from);
            w.remove(from).insert(to, c)
        });
        Pattern::new(self.kind, self.zeros, self.ones, words)
    }

    fn expect_kind(&self, kind: Kind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::KindMismatch { expected: kind.name(), found: self.kind.name() });
        }
        Ok(())
    }

    /// The pattern file: a `vertex a b` or `edge a b` header, then one
    /// string per line in sorted order.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("{} {} {}\n", self.kind.name(), self.zeros, self.ones);
        for w in &self.words {
            s.push_str(&w.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_file_string(text: &str) -> Result<Pattern> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty pattern file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let bad = || Error::Parse(format!("bad pattern header {header:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let kind = match parts[0] {
            "vertex" => Kind::Vertex,
            "edge" => Kind::Edge,
            _ => return Err(bad()),
        };
        let zeros: usize = parts[1].parse().map_err(|_| bad())?;
        let ones: usize = parts[2].parse().map_err(|_| bad())?;
        let words = lines.map(Word::from_str).collect::<Result<Vec<_>>>()?;
        Pattern::new(kind, zeros, ones, words)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}

/// Every word of `L_{a,b}` or `L'_{a,b}`, sorted.
pub fn layer_words(kind: Kind, zeros: usize, ones: usize) -> Result<Vec<Word>> {
    let n = zeros + ones;
    let len = n + (kind == Kind::Edge) as usize;
    if len > MAX_LEN {
        return Err(Error::SizeGuard(format!("strings of length {len} exceed {MAX_LEN}")));
    }
    let mut base = Vec::new();
    combinations(n, ones, &mut |mask| base.push(mask));
    let mut out: Vec<Word> = match kind {
        Kind::Vertex => base.into_iter().map(|m| Word::vertex(n, m)).collect(),
        Kind::Edge => {
            let mut v = Vec::with_capacity(base.len() * len);
            for &m in &base {
                for s in 0..len {
                    v.push(Word::edge(len, insert_bit(m, s, false), s));
                }
            }
            v
        }
    };
    out.sort();
    Ok(out)
}

/// Calls `f` with every `k`-subset of `0..n` as a bitmask.
pub(crate) fn combinations(n: usize, k: usize, f: &mut dyn FnMut(u64)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let limit = low_mask(n);
    let mut s = low_mask(k);
    loop {
        f(s);
        let c = s & s.wrapping_neg();
        let r = s.wrapping_add(c);
        if r == 0 || r > limit {
            return;
        }
        let next = (((r ^ s) >> 2) / c) | r;
        if next > limit {
            return;
        }
        s = next;
    }
}

/// Bipartite graph induced on two adjacent layers of a hypercube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    /// Sorted strings of the lower weight.
    pub lower: Vec<Word>,
    /// Sorted strings of weight one more.
    pub upper: Vec<Word>,
    /// `(lower index, upper index)`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl PatternGraph {
    /// Induced subgraph of the hypercube on the two vertex sets.
    pub fn induced(lower: impl IntoIterator<Item = Word>, upper: impl IntoIterator<Item = Word>) -> PatternGraph {
        let lower: Vec<Word> = lower.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let upper: Vec<Word> = upper.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut edges = Vec::new();
        for (ui, u) in upper.iter().enumerate() {
            let mut bits = u.ones();
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let l = Word::vertex(u.len(), u.ones() & !(1 << b));
                if let Ok(li) = lower.binary_search(&l) {
                    edges.push((li, ui));
                }
            }
        }
        edges.sort_unstable();
        PatternGraph { lower, upper, edges }
    }

    fn from_parts(lower: Vec<Word>, upper: Vec<Word>, edges: Vec<(Word, Word)>) -> PatternGraph {
        let lower: Vec<Word> = lower.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let upper: Vec<Word> = upper.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut idx: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(l, u)| (lower.binary_search(&l).unwrap(), upper.binary_search(&u).unwrap()))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        PatternGraph { lower, upper, edges: idx }
    }

    pub fn vertex_count(&self) -> usize {
        self.lower.len() + self.upper.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// As a multigraph: lower strings first, then upper strings.
    pub fn to_multigraph(&self) -> Result<Multigraph> {
        let off = self.lower.len();
        Multigraph::new(self.vertex_count(), self.edges.iter().map(|&(l, u)| (l, off + u)).collect())
    }

    fn components_without(&self, skip: Option<usize>) -> usize {
        let off = self.lower.len();
        let n = self.vertex_count();
        let mut uf = UnionFind::new(n);
        let mut comps = n - skip.is_some() as usize;
        for &(l, u) in &self.edges {
            if skip == Some(l) || skip == Some(off + u) {
                continue;
            }
            if uf.union(l, off + u) {
                comps -= 1;
            }
        }
        comps
    }

    pub fn component_count(&self) -> usize {
        self.components_without(None)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.component_count() == 1
    }

    /// At least three vertices, connected, and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        self.vertex_count() >= 3
            && self.is_connected()
            && (0..self.vertex_count()).all(|v| self.components_without(Some(v)) == 1)
    }

    fn degrees(&self) -> Vec<usize> {
        let off = self.lower.len();
        let mut deg = vec![0; self.vertex_count()];
        for &(l, u) in &self.edges {
            deg[l] += 1;
            deg[off + u] += 1;
        }
        deg
    }

    /// Connected and 2-regular.
    pub fn is_cycle(&self) -> bool {
        self.vertex_count() >= 3 && self.is_connected() && self.degrees().iter().all(|&d| d == 2)
    }

    /// The edges as starred strings, when every edge joins strings at Hamming distance one.
    pub fn edge_pattern(&self) -> Result<Pattern> {
        let (Some(l0), Some(_)) = (self.lower.first(), self.upper.first()) else {
            return Err(Error::InvalidParameters("pattern graph has an empty part".into()));
        };
        let len = l0.len();
        let ones = l0.weight();
        let words = self
            .edges
            .iter()
            .map(|&(l, u)| {
                let diff = self.lower[l].ones() ^ self.upper[u].ones();
                if diff.count_ones() != 1 || self.lower[l].ones() & diff != 0 {
                    return Err(Error::Layer("edge does not join adjacent strings".into()));
                }
                Ok(Word::edge(len, self.lower[l].ones(), diff.trailing_zeros() as usize))
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(Kind::Edge, len - 1 - ones, ones, words)
    }

    /// One-line summary used by the command line.
    pub fn summary(&self) -> String {
        let shape = if self.is_cycle() {
            format!("C{}", self.vertex_count())
        } else if self.is_connected() {
            "connected".to_string()
        } else {
            format!("{} components", self.component_count())
        };
        format!(
            "lower {} upper {} edges {} components {} shape {}",
            self.lower.len(),
            self.upper.len(),
            self.edge_count(),
            self.component_count(),
            shape
        )
    }
}

/// Spanning trees of `g` as a vertex pattern in `L_{e-v+1, v-1}`.
pub fn x_pattern(g: &Multigraph) -> Result<Pattern> {
    let trees = g.spanning_trees()?;
    let m = g.edge_count();
    let v = g.vertex_count();
    Pattern::new(Kind::Vertex, m + 1 - v, v - 1, trees.iter().map(|t| Word::vertex(m, t.bits())))
}

fn check_marked_edge(g: &Multigraph, e: usize) -> Result<()> {
    if e >= g.edge_count() {
        return Err(Error::EdgeIndex { index: e, edges: g.edge_count() });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.is_loop(e) {
        return Err(Error::LoopEdge(e));
    }
    if g.is_bridge(e) {
        return Err(Error::BridgeEdge(e));
    }
    Ok(())
}

/// Bipartite graph between the spanning trees of `g / e` and of `g \ e`,
/// over the coordinates of the remaining edges.
pub fn h_graph(g: &Multigraph, e: usize) -> Result<PatternGraph> {
    check_marked_edge(g, e)?;
    let m = g.edge_count() - 1;
    let lower = g.minor(e, MinorMode::Contract)?.spanning_trees()?;
    let upper = g.minor(e, MinorMode::Delete)?.spanning_trees()?;
    Ok(PatternGraph::induced(
        lower.iter().map(|t| Word::vertex(m, t.bits())),
        upper.iter().map(|t| Word::vertex(m, t.bits())),
    ))
}

/// Edges `{S, S ∪ {e'}}` with both `S ∪ {e}` and `S ∪ {e'}` spanning trees,
/// in `L'_{e-v, v-2}`.
pub fn y_pattern(g: &Multigraph, e: usize) -> Result<Pattern> {
    let h = h_graph(g, e)?;
    let m = g.edge_count() - 1;
    let ones = g.vertex_count() - 2;
    let words = h.edges.iter().map(|&(l, u)| {
        let star = (h.lower[l].ones() ^ h.upper[u].ones()).trailing_zeros() as usize;
        Word::edge(m, h.lower[l].ones(), star)
    });
    Pattern::new(Kind::Edge, m - 1 - ones, ones, words)
}

/// Swaps `0` and `1` in every string.
pub fn dual_pattern(p: &Pattern) -> Pattern {
    Pattern { kind: p.kind, zeros: p.ones, ones: p.zeros, words: p.words.iter().map(Word::complement).collect() }
}

/// Strings whose last character deleted gives an endpoint of an edge of `y`.
pub fn phi(y: &Pattern) -> Result<Pattern> {
    y.expect_kind(Kind::Edge)?;
    let n = y.word_len();
    let mut words = BTreeSet::new();
    for w in &y.words {
        words.insert(w.lower().insert(n, '1'));
        words.insert(w.upper().insert(n, '0'));
    }
    Pattern::new(Kind::Vertex, y.zeros + 1, y.ones + 1, words)
}

/// Edges of the graph induced on the image of `x` after forgetting coordinate `i`.
pub fn psi(x: &Pattern, i: usize) -> Result<Pattern> {
    x.expect_kind(Kind::Vertex)?;
    let len = x.word_len();
    if i >= len {
        return Err(Error::Coordinate { coord: i, len });
    }
    if x.zeros == 0 || x.ones == 0 {
        return Err(Error::Layer("forgetting a coordinate needs a layer with zeros and ones".into()));
    }
    let image: Vec<Word> = x.words.iter().map(|w| w.remove(i)).collect();
    let (lower, upper): (Vec<Word>, Vec<Word>) = image.into_iter().partition(|w| w.weight() == x.ones - 1);
    let h = PatternGraph::induced(lower, upper);
    let words = h.edges.iter().map(|&(l, u)| {
        let star = (h.lower[l].ones() ^ h.upper[u].ones()).trailing_zeros() as usize;
        Word::edge(len - 1, h.lower[l].ones(), star)
    });
    Pattern::new(Kind::Edge, x.zeros - 1, x.ones - 1, words)
}

/// Product-join along the lower parts: parts `A1 × A2` and
/// `(A1 × B2) ⊔ (B1 × A2)`, pairs encoded by concatenation.
pub fn product_join(h1: &PatternGraph, h2: &PatternGraph) -> Result<PatternGraph> {
    if !h1.is_connected() || !h2.is_connected() {
        return Err(Error::DisconnectedPatternGraph);
    }
    let lower: Vec<Word> = h1.lower.iter().flat_map(|a1| h2.lower.iter().map(|a2| a1.concat(a2))).collect();
    let mut upper: Vec<Word> = h1.lower.iter().flat_map(|a1| h2.upper.iter().map(|b2| a1.concat(b2))).collect();
    upper.extend(h1.upper.iter().flat_map(|b1| h2.lower.iter().map(|a2| b1.concat(a2))));
    let mut edges = Vec::new();
    for a1 in &h1.lower {
        for &(l2, u2) in &h2.edges {
            edges.push((a1.concat(&h2.lower[l2]), a1.concat(&h2.upper[u2])));
        }
    }
    for a2 in &h2.lower {
        for &(l1, u1) in &h1.edges {
            edges.push((h1.lower[l1].concat(a2), h1.upper[u1].concat(a2)));
        }
    }
    Ok(PatternGraph::from_parts(lower, upper, edges))
}

/// The named pattern families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedSpec {
    /// Blocks of the given sizes; all but one block hold a single `1`, the
    /// remaining block is all `0`.
    Alon(Vec<usize>),
    /// Blocks of the given sizes; all but one block hold a single `1`, the
    /// remaining block a single `*`.
    Partite(Vec<usize>),
    /// `L_{3,3}` without `010101, 011010, 100110, 101001`.
    X16,
    /// Edges of `L'_{2,2}` with both endpoints outside `00011, 01100, 10101, 11010`.
    Y18,
    /// Spanning trees of K4.
    XK4,
    /// Edge pattern of K4 with a distinguished edge.
    YK4,
}

impl FromStr for NamedSpec {
    type Err = Error;

    /// `alon:1,2,3`, `partite:2,2`, `x16`, `y18`, `x_k4`, `y_k4`.
    fn from_str(s: &str) -> Result<NamedSpec> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let sizes = || {
            args.split(',')
                .map(|a| a.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad block size {a:?}"))))
                .collect::<Result<Vec<_>>>()
        };
        match name {
            "alon" => Ok(NamedSpec::Alon(sizes()?)),
            "partite" => Ok(NamedSpec::Partite(sizes()?)),
            "x16" => Ok(NamedSpec::X16),
            "y18" => Ok(NamedSpec::Y18),
            "x_k4" => Ok(NamedSpec::XK4),
            "y_k4" => Ok(NamedSpec::YK4),
            _ => Err(Error::Parse(format!("unknown named pattern {name:?}"))),
        }
    }
}

/// A named pattern; `extension` marks patterns built from a graph that is
/// not series-parallel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Named {
    pub pattern: Pattern,
    pub extension: bool,
}

/// K4 labelled so that its spanning-tree pattern is literally `x16`.
pub fn k4_for_x16() -> Multigraph {
    Multigraph::new(4, vec![(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)]).expect("static graph")
}

/// K4 with a distinguished first edge, labelled so that its edge pattern is literally `y18`.
pub fn k4_for_y18() -> Multigraph {
    Multigraph::new(4, vec![(2, 3), (0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
        .and_then(|g| g.with_distinguished(0))
        .expect("static graph")
}

fn check_blocks(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidParameters("block sizes must be positive and non-empty".into()));
    }
    if sizes.iter().sum::<usize>() > MAX_LEN {
        return Err(Error::SizeGuard(format!("total block size exceeds {MAX_LEN}")));
    }
    Ok(())
}

/// Calls `f` with every choice of one position per block, skipping `skip`.
fn block_choices(sizes: &[usize], skip: usize, f: &mut dyn FnMut(u64)) {
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &a| {
            let o = *acc;
            *acc += a;
            Some(o)
        })
        .collect();
    let radix: Vec<usize> = sizes.iter().enumerate().map(|(i, &a)| if i == skip { 1 } else { a }).collect();
    let mut idx = vec![0; sizes.len()];
    loop {
        let mask =
            idx.iter().enumerate().filter(|&(i, _)| i != skip).fold(0u64, |m, (i, &j)| m | 1 << (offsets[i] + j));
        f(mask);
        let mut k = sizes.len();
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

pub fn named_pattern(spec: &NamedSpec) -> Result<Named> {
    let plain = |pattern| Ok(Named { pattern, extension: false });
    match spec {
        NamedSpec::Alon(sizes) => {
            check_blocks(sizes)?;
            let (k, d) = (sizes.len(), sizes.iter().sum::<usize>());
            let mut words = Vec::new();
            for zero_block in 0..k {
                block_choices(sizes, zero_block, &mut |m| words.push(Word::vertex(d, m)));
            }
            plain(Pattern::new(Kind::Vertex, d + 1 - k, k - 1, words)?)
        }
        NamedSpec::Partite(sizes) => {
            check_blocks(sizes)?;
            let (k, n) = (sizes.len(), sizes.iter().sum::<usize>());
            let offsets: Vec<usize> = sizes
                .iter()
                .scan(0, |acc, &a| {
                    let o = *acc;
                    *acc += a;
                    Some(o)
                })
                .collect();
            let mut words = Vec::new();
            for star_block in 0..k {
                block_choices(sizes, star_block, &mut |m| {
                    for j in 0..sizes[star_block] {
                        words.push(Word::edge(n, m, offsets[star_block] + j));
                    }
                });
            }
            plain(Pattern::new(Kind::Edge, n - k, k - 1, words)?)
        }
        NamedSpec::X16 => {
            let removed: HashSet<Word> =
                ["010101", "011010", "100110", "101001"].iter().map(|s| s.parse().unwrap()).collect();
            let words = layer_words(Kind::Vertex, 3, 3)?.into_iter().filter(|w| !removed.contains(w));
            plain(Pattern::new(Kind::Vertex, 3, 3, words)?)
        }
        NamedSpec::Y18 => {
            let removed: HashSet<Word> =
                ["00011", "01100", "10101", "11010"].iter().map(|s| s.parse().unwrap()).collect();
            let keep = |ws: Vec<Word>| ws.into_iter().filter(|w| !removed.contains(w)).collect::<Vec<_>>();
            let h =
                PatternGraph::induced(keep(layer_words(Kind::Vertex, 3, 2)?), keep(layer_words(Kind::Vertex, 2, 3)?));
            plain(h.edge_pattern()?)
        }
        NamedSpec::XK4 => Ok(Named { pattern: x_pattern(&k4_for_x16())?, extension: true }),
        NamedSpec::YK4 => Ok(Named { pattern: y_pattern(&k4_for_y18(), 0)?, extension: true }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spterm::SpTerm;

    fn words(p: &Pattern) -> Vec<String> {
        p.words().iter().map(|w| w.to_string()).collect()
    }

    fn set(ws: &[&str]) -> Vec<String> {
        let mut v: Vec<Word> = ws.iter().map(|s| s.parse().unwrap()).collect();
        v.sort();
        v.into_iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn word_order_and_edit() {
        let a: Word = "01*".parse().unwrap();
        let b: Word = "011".parse().unwrap();
        assert!(b < a);
        assert!("000".parse::<Word>().unwrap() < "001".parse().unwrap());
        assert_eq!(a.remove(1).to_string(), "0*");
        assert_eq!(a.insert(1, '*').to_string().len(), 4);
        assert_eq!(a.insert(0, '1').to_string(), "101*");
        assert_eq!(a.complement().to_string(), "10*");
        assert_eq!(a.lower().to_string(), "010");
        assert_eq!(a.upper().to_string(), "011");
        assert!("0*1*".parse::<Word>().is_err());
    }

    #[test]
    fn worked_example_patterns() {
        let g = Multigraph::k4_minus_edge();
        let x = x_pattern(&g).unwrap();
        assert_eq!((x.zeros(), x.ones(), x.len()), (2, 3, 8));
        let h = h_graph(&g, 4).unwrap();
        assert!(h.is_cycle());
        assert_eq!(h.vertex_count(), 8);
        let y = y_pattern(&g, 4).unwrap();
        // 0101–0111–0110–1110–1010–1011–1001–1101–0101
        assert_eq!(words(&y), set(&["01*1", "011*", "*110", "1*10", "101*", "10*1", "1*01", "*101"]));
    }

    #[test]
    fn small_y_patterns() {
        let c2 = Multigraph::bond(2);
        assert_eq!(words(&y_pattern(&c2, 0).unwrap()), vec!["*"]);
        let tri = Multigraph::cycle(3);
        assert_eq!(words(&y_pattern(&tri, 0).unwrap()), set(&["1*", "*1"]));
        assert_eq!(h_graph(&tri, 0).unwrap().vertex_count(), 3);
        let path = Multigraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(y_pattern(&path, 0), Err(Error::BridgeEdge(0)));
        let lp = Multigraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(y_pattern(&lp, 0), Err(Error::LoopEdge(0)));
    }

    #[test]
    fn dual_examples() {
        let x = x_pattern(&Multigraph::cycle(3)).unwrap();
        assert_eq!(dual_pattern(&x), x_pattern(&Multigraph::bond(3)).unwrap());
        let y = Pattern::new(Kind::Edge, 0, 1, ["1*".parse().unwrap(), "*1".parse().unwrap()]).unwrap();
        assert_eq!(words(&dual_pattern(&y)), set(&["0*", "*0"]));
        assert_eq!(dual_pattern(&dual_pattern(&y)), y);
    }

    #[test]
    fn phi_psi_examples() {
        let star = Pattern::new(Kind::Edge, 0, 0, ["*".parse().unwrap()]).unwrap();
        assert_eq!(words(&phi(&star).unwrap()), set(&["01", "10"]));
        assert!(phi(&Pattern::empty(Kind::Edge, 1, 1)).unwrap().is_empty());
        let x = x_pattern(&Multigraph::bond(2)).unwrap();
        assert_eq!(psi(&x, 0).unwrap(), star);
        let single = Pattern::new(Kind::Vertex, 1, 1, ["01".parse().unwrap()]).unwrap();
        assert!(psi(&single, 0).unwrap().is_empty());
        assert!(matches!(psi(&x, 2), Err(Error::Coordinate { .. })));

        let g = Multigraph::k4_minus_edge();
        let y = y_pattern(&g, 4).unwrap();
        assert_eq!(phi(&y).unwrap(), x_pattern(&g).unwrap());
        assert_eq!(psi(&x_pattern(&g).unwrap(), 4).unwrap(), y);
    }

    #[test]
    fn product_join_of_k2s_is_a_path() {
        let k2 = h_graph(&Multigraph::bond(2), 0).unwrap();
        assert_eq!(k2.vertex_count(), 2);
        let p = product_join(&k2, &k2).unwrap();
        let c2 = Multigraph::bond(2).with_distinguished(0).unwrap();
        assert_eq!(p, h_graph(&c2.two_sum(&c2).unwrap(), 0).unwrap());
        let tri = h_graph(&Multigraph::cycle(3), 0).unwrap();
        assert!(crate::iso::are_isomorphic(&p.to_multigraph().unwrap(), &tri.to_multigraph().unwrap()));
        let disconnected = PatternGraph::induced(vec![Word::vertex(2, 0)], vec![Word::vertex(2, 3)]);
        assert_eq!(product_join(&k2, &disconnected), Err(Error::DisconnectedPatternGraph));
    }

    #[test]
    fn named_examples() {
        let alon = named_pattern(&NamedSpec::Alon(vec![1, 1])).unwrap().pattern;
        assert_eq!(words(&alon), set(&["10", "01"]));
        let partite = named_pattern(&NamedSpec::Partite(vec![1, 1])).unwrap().pattern;
        assert_eq!(partite, y_pattern(&Multigraph::cycle(3), 0).unwrap());
        let x16 = named_pattern(&NamedSpec::X16).unwrap();
        assert_eq!(x16.pattern.len(), 16);
        assert!(!x16.extension);
        assert_eq!(named_pattern(&NamedSpec::XK4).unwrap().pattern, x16.pattern);
        let y18 = named_pattern(&NamedSpec::Y18).unwrap().pattern;
        assert_eq!(y18.len(), 18);
        assert_eq!(named_pattern(&NamedSpec::YK4).unwrap().pattern, y18);
        assert!(named_pattern(&NamedSpec::Alon(vec![])).is_err());
        assert!(named_pattern(&NamedSpec::Partite(vec![2, 0])).is_err());
    }

    #[test]
    fn file_round_trip() {
        let y = y_pattern(&Multigraph::k4_minus_edge(), 4).unwrap();
        let text = y.to_file_string();
        assert!(text.starts_with("edge 1 2\n"));
        assert_eq!(Pattern::from_file_string(&text).unwrap(), y);
        assert!(Pattern::from_file_string("vertex 1 1\n11\n").is_err());
        assert!(Pattern::from_file_string("plane 1 1\n").is_err());
    }

    #[test]
    fn move_coordinate_puts_mark_last() {
        let t = SpTerm::series(vec![SpTerm::Edge, SpTerm::Edge]);
        let x = x_pattern(&t.to_marked_graph()).unwrap();
        let moved = x.move_coordinate(0, 2).unwrap();
        assert_eq!(moved.move_coordinate(2, 0).unwrap(), x);
    }

    #[test]
    fn layer_sizes() {
        assert_eq!(layer_words(Kind::Vertex, 2, 2).unwrap().len(), 6);
        assert_eq!(layer_words(Kind::Edge, 1, 1).unwrap().len(), 6);
        assert_eq!(layer_words(Kind::Vertex, 0, 0).unwrap().len(), 1);
    }
}
