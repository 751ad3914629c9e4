//! Embedding maps between layers and sub-cubes, densities, containment and
//! exact extremal numbers.
//!
//! A map sends slot `j` of a short string to position `pos[j]` of a long one
//! (optionally complemented) and fills every other position with a constant.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::patterns::{combinations, layer_words, Kind, Pattern, Word, MAX_LEN};

/// Most maps a query will hold in memory.
pub const MAX_MAPS: usize = 2_000_000;
/// Most maps an extremal search will stream through.
pub const MAX_STREAMED_MAPS: usize = 50_000_000;
/// Largest ground set for the extremal searches.
pub const MAX_GROUND: usize = 64;
/// Largest ground set for plain subset enumeration.
pub const MAX_EXHAUSTIVE: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EmbeddingMap {
    out_len: usize,
    pos: Vec<usize>,
    flips: u64,
    consts: u64,
}

impl EmbeddingMap {
    pub fn new(out_len: usize, pos: Vec<usize>, flips: u64, consts: u64) -> Result<EmbeddingMap> {
        if out_len > MAX_LEN {
            return Err(Error::SizeGuard(format!("strings of length {out_len} exceed {MAX_LEN}")));
        }
        let mut used = 0u64;
        for &p in &pos {
            if p >= out_len || used >> p & 1 == 1 {
                return Err(Error::InvalidParameters(format!("bad slot position {p}")));
            }
            used |= 1 << p;
        }
        if consts & used != 0 || (out_len < 64 && consts >> out_len != 0) {
            return Err(Error::InvalidParameters("constants overlap slots".into()));
        }
        if pos.len() < 64 && flips >> pos.len() != 0 {
            return Err(Error::InvalidParameters("complemented slot out of range".into()));
        }
        Ok(EmbeddingMap { out_len, pos, flips, consts })
    }

    pub fn in_len(&self) -> usize {
        self.pos.len()
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }

    /// Position of each slot.
    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    /// Mask of positions holding a constant `1`.
    pub fn constant_ones(&self) -> u64 {
        self.consts
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.len() != self.pos.len() {
            return Err(Error::InvalidParameters(format!(
                "string of length {} given to a map on length {}",
                w.len(),
                self.pos.len()
            )));
        }
        Ok(self.apply_unchecked(w))
    }

    fn apply_unchecked(&self, w: &Word) -> Word {
        let mut ones = self.consts;
        let star = w.star();
        for (j, &p) in self.pos.iter().enumerate() {
            if Some(j) != star && ((w.ones() ^ self.flips) >> j) & 1 == 1 {
                ones |= 1 << p;
            }
        }
        match star {
            Some(s) => Word::edge(self.out_len, ones, self.pos[s]),
            None => Word::vertex(self.out_len, ones),
        }
    }
}

/// Tokens separated by spaces: `s3` for slot 3, `!s3` for its complement,
/// `0` and `1` for constants.
impl fmt::Display for EmbeddingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut slot = vec![None; self.out_len];
        for (j, &p) in self.pos.iter().enumerate() {
            slot[p] = Some(j);
        }
        let tokens: Vec<String> = (0..self.out_len)
            .map(|k| match slot[k] {
                Some(j) if self.flips >> j & 1 == 1 => format!("!s{}", j + 1),
                Some(j) => format!("s{}", j + 1),
                None => ((self.consts >> k & 1) as u8).to_string(),
            })
            .collect();
        f.write_str(&tokens.join(" "))
    }
}

impl FromStr for EmbeddingMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<EmbeddingMap> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let mut slots: Vec<(usize, usize, bool)> = Vec::new();
        let mut consts = 0u64;
        for (k, t) in tokens.iter().enumerate() {
            let bad = || Error::Parse(format!("bad map token {t:?}"));
            match *t {
                "0" => {}
                "1" => consts |= 1 << k,
                _ => {
                    let (flip, rest) = match t.strip_prefix('!') {
                        Some(r) => (true, r),
                        None => (false, *t),
                    };
                    let j: usize = rest.strip_prefix('s').ok_or_else(bad)?.parse().map_err(|_| bad())?;
                    if j == 0 {
                        return Err(bad());
                    }
                    slots.push((j - 1, k, flip));
                }
            }
        }
        slots.sort_unstable();
        if slots.iter().enumerate().any(|(i, s)| s.0 != i) {
            return Err(Error::Parse(format!("slots of {s:?} are not s1..sn")));
        }
        let flips = slots.iter().filter(|s| s.2).fold(0u64, |m, s| m | 1 << s.0);
        EmbeddingMap::new(tokens.len(), slots.iter().map(|s| s.1).collect(), flips, consts)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `|P_{a,b,a',b'}|`, or `|P'_{a,b,a',b'}|` when `starred`.
pub fn map_count(a: usize, b: usize, a2: usize, b2: usize, starred: bool) -> BigInt {
    if a > a2 || b > b2 {
        return BigInt::from(0);
    }
    factorial(a2 + b2 + starred as usize) / (factorial(a2 - a) * factorial(b2 - b))
}

/// Calls `f` with every injective placement of `n` slots into `0..m`, in
/// lexicographic order of the position vectors.
fn placements(n: usize, m: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(n: usize, m: usize, used: u64, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for p in 0..m {
            if used >> p & 1 == 0 {
                cur.push(p);
                rec(n, m, used | 1 << p, cur, f);
                cur.pop();
            }
        }
    }
    if n <= m {
        rec(n, m, 0, &mut Vec::with_capacity(n), f);
    }
}

fn guard_count(count: &BigInt, limit: usize) -> Result<()> {
    if *count > BigInt::from(limit) {
        return Err(Error::SizeGuard(format!("{count} maps exceed the limit of {limit}")));
    }
    Ok(())
}

/// Every map in `P_{a,b,a',b'}` (or `P'` when `starred`): slot placements in
/// lexicographic order, then constant fillings in increasing order.
pub fn enumerate_maps(a: usize, b: usize, a2: usize, b2: usize, starred: bool) -> Result<Vec<EmbeddingMap>> {
    let mut out = Vec::new();
    for_each_map(a, b, a2, b2, starred, MAX_MAPS, &mut |p| out.push(p.clone()))?;
    Ok(out)
}

fn for_each_map(
    a: usize,
    b: usize,
    a2: usize,
    b2: usize,
    starred: bool,
    limit: usize,
    f: &mut dyn FnMut(&EmbeddingMap),
) -> Result<()> {
    if a > a2 || b > b2 {
        return Err(Error::Layer(format!("layer ({a}, {b}) does not fit in ({a2}, {b2})")));
    }
    let n = a + b + starred as usize;
    let m = a2 + b2 + starred as usize;
    if m > MAX_LEN {
        return Err(Error::SizeGuard(format!("strings of length {m} exceed {MAX_LEN}")));
    }
    guard_count(&map_count(a, b, a2, b2, starred), limit)?;
    let mut map = EmbeddingMap { out_len: m, pos: Vec::new(), flips: 0, consts: 0 };
    placements(n, m, &mut |pos| {
        let used = pos.iter().fold(0u64, |u, &p| u | 1 << p);
        let free: Vec<usize> = (0..m).filter(|&p| used >> p & 1 == 0).collect();
        map.pos.clear();
        map.pos.extend_from_slice(pos);
        combinations(free.len(), b2 - b, &mut |sel| {
            map.consts = (0..free.len()).filter(|&k| sel >> k & 1 == 1).fold(0u64, |c, k| c | 1 << free[k]);
            f(&map);
        });
    });
    Ok(())
}

/// How a sub-cube may sit in a bigger cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubeMode {
    /// Order-preserving: coordinates are placed, never complemented.
    Oriented,
    /// Any face: coordinates may also be complemented.
    Face,
}

/// Every embedding of `Q_d` into `Q_n` of the given mode.
pub fn enumerate_cube_maps(d: usize, n: usize, mode: CubeMode) -> Result<Vec<EmbeddingMap>> {
    let mut out = Vec::new();
    for_each_cube_map(d, n, mode, MAX_MAPS, &mut |p| out.push(p.clone()))?;
    Ok(out)
}

fn for_each_cube_map(d: usize, n: usize, mode: CubeMode, limit: usize, f: &mut dyn FnMut(&EmbeddingMap)) -> Result<()> {
    if d > n {
        return Err(Error::InvalidParameters(format!("Q_{d} does not fit in Q_{n}")));
    }
    if n > MAX_LEN {
        return Err(Error::SizeGuard(format!("Q_{n} is too large")));
    }
    let flip_count: u32 = if mode == CubeMode::Face { d as u32 } else { 0 };
    let count = factorial(n) / factorial(n - d) * (BigInt::from(1) << (n - d) as u32) * (BigInt::from(1) << flip_count);
    guard_count(&count, limit)?;
    let mut map = EmbeddingMap { out_len: n, pos: Vec::new(), flips: 0, consts: 0 };
    placements(d, n, &mut |pos| {
        let used = pos.iter().fold(0u64, |u, &p| u | 1 << p);
        let free: Vec<usize> = (0..n).filter(|&p| used >> p & 1 == 0).collect();
        map.pos.clear();
        map.pos.extend_from_slice(pos);
        for sel in 0..1u64 << free.len() {
            map.consts = (0..free.len()).filter(|&k| sel >> k & 1 == 1).fold(0u64, |c, k| c | 1 << free[k]);
            for flips in 0..1u64 << flip_count {
                map.flips = flips;
                f(&map);
            }
        }
    });
    Ok(())
}

fn layer_maps(small: &Pattern, kind: Kind, zeros: usize, ones: usize) -> Result<Vec<EmbeddingMap>> {
    if small.kind() != kind {
        return Err(Error::KindMismatch { expected: kind.name(), found: small.kind().name() });
    }
    enumerate_maps(small.zeros(), small.ones(), zeros, ones, kind == Kind::Edge)
}

fn maps_into(maps: &[EmbeddingMap], x: &Pattern, s: &BTreeSet<Word>, exec: Exec) -> Vec<bool> {
    exec.map(maps, |p| x.words().iter().all(|w| s.contains(&p.apply_unchecked(w))))
}

/// `t(X, X')`: the fraction of maps sending `small` into `big`.
pub fn density_t(small: &Pattern, big: &Pattern) -> Result<BigRational> {
    density_t_with(small, big, Exec::default())
}

pub fn density_t_with(small: &Pattern, big: &Pattern, exec: Exec) -> Result<BigRational> {
    let maps = layer_maps(small, big.kind(), big.zeros(), big.ones())?;
    let hits = exec.map_reduce(
        &maps,
        || 0usize,
        |p| small.words().iter().all(|w| big.contains(&p.apply_unchecked(w))) as usize,
        |a, b| a + b,
    );
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(maps.len())))
}

/// First map (in enumeration order) sending `x` into the layer set `s`.
pub fn contains_pattern(s: &Pattern, x: &Pattern) -> Result<Option<EmbeddingMap>> {
    contains_pattern_with(s, x, Exec::default())
}

pub fn contains_pattern_with(s: &Pattern, x: &Pattern, exec: Exec) -> Result<Option<EmbeddingMap>> {
    let maps = layer_maps(x, s.kind(), s.zeros(), s.ones())?;
    Ok(first_hit(&maps, x, s.words(), exec))
}

fn first_hit(maps: &[EmbeddingMap], x: &Pattern, s: &BTreeSet<Word>, exec: Exec) -> Option<EmbeddingMap> {
    let hits = maps_into(maps, x, s, exec);
    hits.iter().position(|&h| h).map(|i| maps[i].clone())
}

fn check_cube_set(s: &BTreeSet<Word>, n: usize, kind: Kind) -> Result<()> {
    for w in s {
        if w.len() != n || w.is_edge() != (kind == Kind::Edge) {
            return Err(Error::Layer(format!("{w} is not a {} of Q_{n}", kind.name())));
        }
    }
    Ok(())
}

/// First embedding of `Q_d` into `Q_n` sending `x` into `s`, a set of
/// vertices or edges of `Q_n` matching `x`'s kind.
pub fn contains_in_cube(s: &BTreeSet<Word>, n: usize, x: &Pattern, mode: CubeMode) -> Result<Option<EmbeddingMap>> {
    check_cube_set(s, n, x.kind())?;
    let d = x.word_len();
    let maps = enumerate_cube_maps(d, n, mode)?;
    Ok(first_hit(&maps, x, s, Exec::default()))
}

/// A largest avoiding set, lexicographically least among the largest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremal {
    pub value: usize,
    pub witness: Vec<Word>,
}

/// Ground set and the images of the pattern as bitmasks over it.
struct Instance {
    ground: Vec<Word>,
    images: Vec<u64>,
}

impl Instance {
    fn build(
        ground: Vec<Word>,
        x: &Pattern,
        limit: usize,
        visit: impl FnOnce(&mut dyn FnMut(&EmbeddingMap)) -> Result<()>,
    ) -> Result<Instance> {
        if x.is_empty() {
            return Err(Error::EmptyPattern);
        }
        if ground.len() > limit {
            return Err(Error::SizeGuard(format!("ground set of {} exceeds {limit}", ground.len())));
        }
        let index: HashMap<Word, usize> = ground.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let mut seen = std::collections::HashSet::new();
        visit(&mut |p| {
            seen.insert(x.words().iter().fold(0u64, |m, w| m | 1 << index[&p.apply_unchecked(w)]));
        })?;
        let mut images: Vec<u64> = seen.into_iter().collect();
        images.sort_unstable();
        // Keep only inclusion-minimal images.
        images.sort_by_key(|m| m.count_ones());
        let mut minimal: Vec<u64> = Vec::new();
        for m in images {
            if !minimal.iter().any(|&k| k & !m == 0) {
                minimal.push(m);
            }
        }
        Ok(Instance { ground, images: minimal })
    }

    fn full(&self) -> u64 {
        if self.ground.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.ground.len()) - 1
        }
    }

    fn witness(&self, mask: u64) -> Vec<Word> {
        (0..self.ground.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.ground[i]).collect()
    }

    /// Branch and bound, then greedy lexicographic witness extraction.
    fn solve(&self, symmetric: bool) -> Extremal {
        let n = self.ground.len();
        let best = if symmetric && !self.images.is_empty() {
            let forced = 1u64;
            1 + min_hitting(&self.images, forced, 0, n).expect("forcing one element stays feasible")
        } else {
            min_hitting(&self.images, 0, 0, n).expect("hitting sets exist")
        };
        // Put as many early elements in the avoiding set as optimality allows.
        let mut forced_in = 0u64;
        let mut forbidden = 0u64;
        for i in 0..n {
            let trial = forbidden | 1 << i;
            let ok = min_hitting(&self.images, forced_in, trial, n)
                .is_some_and(|k| k + forced_in.count_ones() as usize == best);
            if ok {
                forbidden = trial;
            } else {
                forced_in |= 1 << i;
            }
        }
        Extremal { value: n - best, witness: self.witness(forbidden & self.full()) }
    }

    /// Plain enumeration of all subsets.
    fn exhaustive(&self) -> Extremal {
        let n = self.ground.len();
        let mut best: Option<u64> = None;
        for s in 0..1u64 << n {
            if self.images.iter().any(|&m| m & !s == 0) {
                continue;
            }
            best = match best {
                None => Some(s),
                Some(b) => {
                    let (cs, cb) = (s.count_ones(), b.count_ones());
                    let diff = s ^ b;
                    if cs > cb || (cs == cb && diff & diff.wrapping_neg() & s != 0) {
                        Some(s)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let s = best.unwrap_or(0);
        Extremal { value: s.count_ones() as usize, witness: self.witness(s) }
    }
}

/// Size of a smallest set hitting every image, disjoint from `forbidden`,
/// not counting the elements already in `forced`. `None` if impossible.
fn min_hitting(images: &[u64], forced: u64, forbidden: u64, n: usize) -> Option<usize> {
    let open: Vec<u64> = images.iter().filter(|&&m| m & forced == 0).map(|&m| m & !forbidden).collect();
    if open.contains(&0) {
        return None;
    }
    let mut best = n + 1;
    branch(&open, 0, &mut best);
    (best <= n).then_some(best)
}

fn branch(open: &[u64], depth: usize, best: &mut usize) {
    if open.is_empty() {
        *best = (*best).min(depth);
        return;
    }
    if depth + packing_bound(open) >= *best {
        return;
    }
    let pick = *open.iter().min_by_key(|m| m.count_ones()).unwrap();
    let mut excluded = 0u64;
    let mut bits = pick;
    while bits != 0 {
        let e = bits & bits.wrapping_neg();
        bits &= bits - 1;
        let mut next = Vec::with_capacity(open.len());
        let mut dead = false;
        for &m in open {
            if m & e != 0 {
                continue;
            }
            let r = m & !excluded;
            if r == 0 {
                dead = true;
                break;
            }
            next.push(r);
        }
        if !dead {
            branch(&next, depth + 1, best);
        }
        excluded |= e;
    }
}

/// Number of pairwise disjoint sets found greedily, smallest first.
fn packing_bound(open: &[u64]) -> usize {
    let mut sets: Vec<u64> = open.to_vec();
    sets.sort_by_key(|m| m.count_ones());
    let mut used = 0u64;
    let mut count = 0;
    for m in sets {
        if m & used == 0 {
            used |= m;
            count += 1;
        }
    }
    count
}

fn layer_instance(zeros: usize, ones: usize, x: &Pattern, limit: usize) -> Result<Instance> {
    let ground = layer_words(x.kind(), zeros, ones)?;
    if ground.len() > limit {
        return Err(Error::SizeGuard(format!("layer of {} strings exceeds {limit}", ground.len())));
    }
    let starred = x.kind() == Kind::Edge;
    Instance::build(ground, x, limit, |f| for_each_map(x.zeros(), x.ones(), zeros, ones, starred, MAX_STREAMED_MAPS, f))
}

fn cube_ground(n: usize, kind: Kind) -> Vec<Word> {
    let mut ground: Vec<Word> = match kind {
        Kind::Vertex => (0..1u64 << n).map(|m| Word::vertex(n, m)).collect(),
        Kind::Edge => (0..n)
            .flat_map(|s| (0..1u64 << (n - 1)).map(move |m| Word::edge(n, crate::patterns::insert_bit(m, s, false), s)))
            .collect(),
    };
    ground.sort();
    ground
}

fn cube_instance(n: usize, x: &Pattern, mode: CubeMode, limit: usize) -> Result<Instance> {
    let size = match x.kind() {
        Kind::Vertex => 1usize.checked_shl(n as u32),
        Kind::Edge => 1usize.checked_shl(n.saturating_sub(1) as u32).map(|k| k * n),
    };
    if size.is_none_or(|s| s > limit) {
        return Err(Error::SizeGuard(format!("Q_{n} has more than {limit} {}s", x.kind().name())));
    }
    let d = x.word_len();
    Instance::build(cube_ground(n, x.kind()), x, limit, |f| for_each_cube_map(d, n, mode, MAX_STREAMED_MAPS, f))
}

/// `ex(L_{a',b'}, X)` over layer maps.
pub fn ex_layer(zeros: usize, ones: usize, x: &Pattern) -> Result<Extremal> {
    Ok(layer_instance(zeros, ones, x, MAX_GROUND)?.solve(true))
}

/// `ex(L_{a',b'}, X)` by plain subset enumeration.
pub fn ex_layer_exhaustive(zeros: usize, ones: usize, x: &Pattern) -> Result<Extremal> {
    Ok(layer_instance(zeros, ones, x, MAX_EXHAUSTIVE)?.exhaustive())
}

/// `ex(Q_n, X)`: the largest set of vertices (or edges, for an edge
/// pattern) of `Q_n` containing no image of `X` under the given embeddings.
pub fn ex_cube(n: usize, x: &Pattern, mode: CubeMode) -> Result<Extremal> {
    // Both embedding families are closed under the cube's coordinate
    // permutations, which act transitively on vertices and on edges; face
    // embeddings are also closed under complementation.
    let symmetric = mode == CubeMode::Face;
    Ok(cube_instance(n, x, mode, MAX_GROUND)?.solve(symmetric))
}

pub fn ex_cube_exhaustive(n: usize, x: &Pattern, mode: CubeMode) -> Result<Extremal> {
    Ok(cube_instance(n, x, mode, MAX_EXHAUSTIVE)?.exhaustive())
}
