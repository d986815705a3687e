//! Shards of the adjoint braid arrangement.
//!
//! A shard with support `P` is stored as one sign per canonical key of the
//! flat of `P`. A canonical key is the smaller bitmask of the pair
//! `(Redn_P(E), Redn_P(I - E))`; every subset `E` that is nonempty modulo
//! `P` maps to exactly one key, with orientation, and subsets that are empty
//! modulo `P` have sign zero.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{rat, strictly_feasible, Rational, RationalMatrix, Sign, SparseVector};
use crate::ground::{GroundSet, Partition, Subset};

/// Largest ground set for which shards can be built (keys fit in 128 bits).
pub const MAX_SHARD_ELEMENTS: usize = 8;

/// Default seed for generic seed points.
pub const DEFAULT_SEED: u64 = 0x5eed_0f5b_a4d5;

/// The flat of a partition together with its hyperplanes.
pub struct Flat {
    partition: Partition,
    keys: Vec<Subset>,
    key_index: HashMap<u64, usize>,
    /// coroot basis `e_{b0} - e_{bi}` of the flat
    coroots: Vec<(usize, usize)>,
    constraints: RationalMatrix,
}

impl Flat {
    pub fn new(partition: Partition) -> Result<Flat> {
        let n = partition.n();
        if n > MAX_SHARD_ELEMENTS {
            return Err(Error::UnsupportedSize(
                n,
                "at most 8 for shard computations",
            ));
        }
        let mut keys: Vec<Subset> = Vec::new();
        for e in 1..(1u64 << n) {
            if let Some((k, _)) = canonical(&partition, Subset(e)) {
                keys.push(k);
            }
        }
        keys.sort();
        keys.dedup();
        let key_index = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.bits(), i))
            .collect();
        let coroots: Vec<(usize, usize)> = partition
            .blocks()
            .iter()
            .flat_map(|b| {
                let first = b.min_element().expect("nonempty block");
                b.iter().skip(1).map(move |i| (first, i))
            })
            .collect();
        let rows: Vec<SparseVector> = keys
            .iter()
            .map(|k| {
                let mut row = SparseVector::new();
                for (p, (a, b)) in coroots.iter().enumerate() {
                    let v = k.contains(*a) as i64 - k.contains(*b) as i64;
                    row.set(p, rat(v));
                }
                row
            })
            .collect();
        let constraints = RationalMatrix::from_rows(coroots.len(), rows);
        Ok(Flat {
            partition,
            keys,
            key_index,
            coroots,
            constraints,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    /// Canonical keys, ascending.
    pub fn keys(&self) -> &[Subset] {
        &self.keys
    }

    pub fn num_keys(&self) -> usize {
        self.keys.len()
    }

    pub fn dimension(&self) -> usize {
        self.coroots.len()
    }

    /// Key index of `E` and whether `E` has the key's orientation.
    pub fn class_of(&self, e: Subset) -> Option<(usize, bool)> {
        canonical(&self.partition, e).map(|(k, same)| (self.key_index[&k.bits()], same))
    }

    pub fn key_position(&self, key: Subset) -> Option<usize> {
        self.key_index.get(&key.bits()).copied()
    }

    /// Whether hyperplane `i` is `R`-semisimple.
    pub fn key_is_r_semisimple(&self, i: usize, r: &Partition) -> bool {
        let k = self.keys[i];
        r.blocks().iter().any(|b| k.is_subset_of(*b))
    }

    /// Linear forms `lambda_key` in coroot coordinates, one row per key.
    pub fn constraints(&self) -> &RationalMatrix {
        &self.constraints
    }

    /// Maps coroot coordinates to a point of `R^I`.
    pub fn point(&self, coords: &[Rational]) -> Vec<Rational> {
        let mut h = vec![Rational::zero(); self.n()];
        for ((a, b), c) in self.coroots.iter().zip(coords) {
            h[*a] += c;
            h[*b] -= c;
        }
        h
    }

    fn sign_pattern(&self, minus: u128) -> Vec<Sign> {
        (0..self.keys.len())
            .map(|i| {
                if minus >> i & 1 == 1 {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .collect()
    }

    /// Witness coordinates for a sign pattern, if it is realized.
    fn certify(&self, minus: u128) -> Option<Vec<Rational>> {
        strictly_feasible(&self.constraints, &self.sign_pattern(minus))
    }
}

impl fmt::Debug for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flat{:?}[{} keys]", self.partition, self.keys.len())
    }
}

/// Canonical key of `E` modulo `P` and whether `E` points the key's way.
fn canonical(p: &Partition, e: Subset) -> Option<(Subset, bool)> {
    let r = p.reduction(e);
    if r.is_empty() {
        return None;
    }
    let partner = p.closure(r).difference(r);
    if r.bits() < partner.bits() {
        Some((r, true))
    } else {
        Some((partner, false))
    }
}

/// A relatively open face of the adjoint braid arrangement.
///
/// Equality and hashing use the support and the signs only.
#[derive(Clone)]
pub struct Shard {
    flat: Arc<Flat>,
    /// bit `i` set means the sign at key `i` is minus
    minus: u128,
}

impl Shard {
    pub(crate) fn from_bits(flat: Arc<Flat>, minus: u128) -> Shard {
        Shard { flat, minus }
    }

    pub fn flat(&self) -> &Arc<Flat> {
        &self.flat
    }

    pub fn support(&self) -> &Partition {
        &self.flat.partition
    }

    pub fn minus_bits(&self) -> u128 {
        self.minus
    }

    pub fn is_maximal(&self) -> bool {
        self.support().num_blocks() == 1
    }

    pub fn key_sign(&self, i: usize) -> Sign {
        if self.minus >> i & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// `s_X(E)`; zero when `E` is empty modulo the support.
    pub fn sign(&self, e: Subset) -> Sign {
        match self.flat.class_of(e) {
            None => Sign::Zero,
            Some((i, true)) => self.key_sign(i),
            Some((i, false)) => self.key_sign(i).negate(),
        }
    }

    /// Copy with the sign at key `i` reversed (not necessarily realizable).
    pub fn flipped(&self, i: usize) -> Shard {
        Shard::from_bits(self.flat.clone(), self.minus ^ (1u128 << i))
    }

    /// Compact identifier: signs in key order, e.g. `[+-+]`.
    pub fn sign_string(&self) -> String {
        let s: String = (0..self.flat.num_keys())
            .map(|i| self.key_sign(i).symbol())
            .collect();
        format!("[{}]", s)
    }

    /// A point of `R^I` in the relative interior, certified by exact LP.
    pub fn witness(&self) -> Option<Vec<Rational>> {
        self.flat.certify(self.minus).map(|c| self.flat.point(&c))
    }

    pub fn is_realizable(&self) -> bool {
        self.flat.certify(self.minus).is_some()
    }

    fn order_key(&self) -> u128 {
        // key 0 becomes the most significant bit: lexicographic, plus first
        let k = self.flat.num_keys();
        if k == 0 {
            0
        } else {
            self.minus.reverse_bits() >> (128 - k)
        }
    }
}

impl PartialEq for Shard {
    fn eq(&self, other: &Shard) -> bool {
        self.minus == other.minus && self.flat.partition == other.flat.partition
    }
}

impl Eq for Shard {}

impl Hash for Shard {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.flat.partition.hash(state);
        self.minus.hash(state);
    }
}

impl PartialOrd for Shard {
    fn partial_cmp(&self, other: &Shard) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Shard {
    fn cmp(&self, other: &Shard) -> std::cmp::Ordering {
        self.flat
            .partition
            .cmp(&other.flat.partition)
            .then_with(|| self.order_key().cmp(&other.order_key()))
    }
}

impl fmt::Debug for Shard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.flat.partition, self.sign_string())
    }
}

/// The shard of `P` containing the point `h`.
pub fn shard_from_point(p: &Partition, h: &[Rational]) -> Result<Shard> {
    let flat = Arc::new(Flat::new(p.clone())?);
    shard_from_point_in(&flat, h)
}

pub fn shard_from_point_in(flat: &Arc<Flat>, h: &[Rational]) -> Result<Shard> {
    let p = flat.partition();
    if h.len() != p.n() {
        return Err(Error::GroundMismatch(h.len(), p.n()));
    }
    let lambda = |s: Subset| s.iter().fold(Rational::zero(), |acc, i| acc + &h[i]);
    for b in p.blocks() {
        if !lambda(*b).is_zero() {
            return Err(Error::NotInFlat(format!("{:?}", b)));
        }
    }
    let mut minus = 0u128;
    for (i, k) in flat.keys().iter().enumerate() {
        match Sign::of(&lambda(*k)) {
            Sign::Zero => return Err(Error::OnHyperplane(format!("{:?}", k))),
            Sign::Minus => minus |= 1u128 << i,
            Sign::Plus => {}
        }
    }
    Ok(Shard::from_bits(flat.clone(), minus))
}

/// Shards sharing one support, sorted, with an index for lookups.
pub struct ShardBasis {
    flat: Arc<Flat>,
    shards: Vec<Shard>,
    index: HashMap<u128, usize>,
}

impl ShardBasis {
    fn from_shards(flat: Arc<Flat>, mut shards: Vec<Shard>) -> ShardBasis {
        shards.sort();
        let index = shards
            .iter()
            .enumerate()
            .map(|(i, s)| (s.minus, i))
            .collect();
        ShardBasis {
            flat,
            shards,
            index,
        }
    }

    pub fn flat(&self) -> &Arc<Flat> {
        &self.flat
    }

    pub fn partition(&self) -> &Partition {
        self.flat.partition()
    }

    pub fn shards(&self) -> &[Shard] {
        &self.shards
    }

    pub fn len(&self) -> usize {
        self.shards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shards.is_empty()
    }

    pub fn get(&self, i: usize) -> &Shard {
        &self.shards[i]
    }

    pub fn index_of(&self, x: &Shard) -> Option<usize> {
        if x.support() != self.partition() {
            return None;
        }
        self.index.get(&x.minus).copied()
    }

    pub(crate) fn index_of_bits(&self, minus: u128) -> Option<usize> {
        self.index.get(&minus).copied()
    }
}

impl fmt::Debug for ShardBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShardBasis{:?}[{}]", self.partition(), self.len())
    }
}

fn generic_seed(flat: &Arc<Flat>, seed: u64) -> Shard {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = flat.dimension();
    let mut range = 8i64;
    loop {
        let coords: Vec<Rational> = (0..d).map(|_| rat(rng.gen_range(-range..=range))).collect();
        let values = flat.constraints().mul_dense(&coords);
        if values.iter().all(|v| !v.is_zero()) {
            let minus = values
                .iter()
                .enumerate()
                .filter(|(_, v)| Sign::of(v) == Sign::Minus)
                .fold(0u128, |m, (i, _)| m | (1u128 << i));
            return Shard::from_bits(flat.clone(), minus);
        }
        range = (range * 2).min(1 << 20);
    }
}

/// All shards with support `P` by a breadth-first walk across walls; each
/// step is certified by strict feasibility.
pub fn enumerate_shards(p: &Partition) -> Result<Vec<Shard>> {
    let flat = Arc::new(Flat::new(p.clone())?);
    Ok(enumerate_in(&flat, DEFAULT_SEED))
}

pub fn enumerate_shards_seeded(p: &Partition, seed: u64) -> Result<Vec<Shard>> {
    let flat = Arc::new(Flat::new(p.clone())?);
    Ok(enumerate_in(&flat, seed))
}

fn enumerate_in(flat: &Arc<Flat>, seed: u64) -> Vec<Shard> {
    let start = generic_seed(flat, seed);
    let k = flat.num_keys();
    let mut seen: HashSet<u128> = HashSet::new();
    let mut rejected: HashSet<u128> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.minus);
    queue.push_back(start.minus);
    while let Some(m) = queue.pop_front() {
        for i in 0..k {
            let next = m ^ (1u128 << i);
            if seen.contains(&next) || rejected.contains(&next) {
                continue;
            }
            if flat.certify(next).is_some() {
                seen.insert(next);
                queue.push_back(next);
            } else {
                rejected.insert(next);
            }
        }
    }
    let mut out: Vec<Shard> = seen
        .into_iter()
        .map(|m| Shard::from_bits(flat.clone(), m))
        .collect();
    out.sort();
    out
}

/// Independent oracle: test every sign pattern by LP. Only for small flats.
pub fn enumerate_shards_exhaustive(p: &Partition) -> Result<Vec<Shard>> {
    let flat = Arc::new(Flat::new(p.clone())?);
    if flat.num_keys() > 16 {
        return Err(Error::UnsupportedSize(
            p.n(),
            "exhaustive oracle needs at most 16 hyperplanes",
        ));
    }
    let mut out: Vec<Shard> = (0..(1u128 << flat.num_keys()))
        .filter(|m| flat.certify(*m).is_some())
        .map(|m| Shard::from_bits(flat.clone(), m))
        .collect();
    out.sort();
    Ok(out)
}

fn require_finer(p: &Partition, r: &Partition) -> Result<()> {
    if !p.is_finer(r)? {
        return Err(Error::NotFiner {
            finer: format!("{:?}", p),
            coarser: format!("{:?}", r),
        });
    }
    Ok(())
}

/// Interned flats and shard bases for one ground set size.
///
/// Bases are enumerated on first use and shared afterwards.
pub struct Atlas {
    n: usize,
    seed: u64,
    flats: RwLock<HashMap<Partition, Arc<Flat>>>,
    bases: RwLock<HashMap<Partition, Arc<ShardBasis>>>,
    arrows: RwLock<HashMap<ArrowKey, Arc<Vec<usize>>>>,
}

/// Target partition and cut `(parent, left)` of a cached arrow table.
pub(crate) type ArrowKey = (Partition, Subset, Subset);

impl Atlas {
    pub fn new(n: usize) -> Result<Atlas> {
        Atlas::with_seed(n, DEFAULT_SEED)
    }

    pub fn with_seed(n: usize, seed: u64) -> Result<Atlas> {
        if n == 0 || n > MAX_SHARD_ELEMENTS {
            return Err(Error::UnsupportedSize(n, "1..=8"));
        }
        Ok(Atlas {
            n,
            seed,
            flats: RwLock::new(HashMap::new()),
            bases: RwLock::new(HashMap::new()),
            arrows: RwLock::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flat(&self, p: &Partition) -> Result<Arc<Flat>> {
        if p.n() != self.n {
            return Err(Error::GroundMismatch(p.n(), self.n));
        }
        if let Some(f) = self.flats.read().expect("lock").get(p) {
            return Ok(f.clone());
        }
        let f = Arc::new(Flat::new(p.clone())?);
        Ok(self
            .flats
            .write()
            .expect("lock")
            .entry(p.clone())
            .or_insert(f)
            .clone())
    }

    pub fn basis(&self, p: &Partition) -> Result<Arc<ShardBasis>> {
        if let Some(b) = self.bases.read().expect("lock").get(p) {
            return Ok(b.clone());
        }
        let flat = self.flat(p)?;
        let shards = enumerate_in(&flat, self.seed);
        let basis = Arc::new(ShardBasis::from_shards(flat, shards));
        Ok(self
            .bases
            .write()
            .expect("lock")
            .entry(p.clone())
            .or_insert(basis)
            .clone())
    }

    pub(crate) fn cached_arrow(&self, key: &ArrowKey) -> Option<Arc<Vec<usize>>> {
        self.arrows.read().expect("lock").get(key).cloned()
    }

    pub(crate) fn store_arrow(&self, key: ArrowKey, table: Vec<usize>) -> Arc<Vec<usize>> {
        self.arrows
            .write()
            .expect("lock")
            .entry(key)
            .or_insert_with(|| Arc::new(table))
            .clone()
    }

    /// Looks up a shard in its interned basis; fails if it is not realizable.
    pub fn locate(&self, x: &Shard) -> Result<(Arc<ShardBasis>, usize)> {
        let basis = self.basis(x.support())?;
        let i = basis
            .index_of_bits(x.minus)
            .ok_or_else(|| Error::Invariant(format!("sign vector {:?} is not a shard", x)))?;
        Ok((basis, i))
    }

    /// Builds a shard of support `p` from a sign function, interned.
    pub fn shard_with_signs<F: Fn(Subset) -> Sign>(&self, p: &Partition, sign: F) -> Result<Shard> {
        let flat = self.flat(p)?;
        let mut minus = 0u128;
        for (i, k) in flat.keys().iter().enumerate() {
            match sign(*k) {
                Sign::Minus => minus |= 1u128 << i,
                Sign::Plus => {}
                Sign::Zero => {
                    return Err(Error::Invariant(format!(
                        "zero sign on hyperplane {:?} of {:?}",
                        k, p
                    )))
                }
            }
        }
        Ok(Shard::from_bits(flat, minus))
    }

    /// `Delta_R(X)`: one shard per block of `R`.
    pub fn project(&self, r: &Partition, x: &Shard) -> Result<Vec<Shard>> {
        let p = x.support();
        require_finer(p, r)?;
        r.blocks()
            .iter()
            .map(|t| {
                let pj = p.restrict_complete(*t);
                self.shard_with_signs(&pj, |s| x.sign(s.intersection(*t)))
            })
            .collect()
    }

    /// Steinmann R-equivalence classes of the shards of `P`.
    pub fn steinmann_classes(&self, p: &Partition, r: &Partition) -> Result<Vec<Vec<Shard>>> {
        let basis = self.basis(p)?;
        Ok(classes_of(&basis, r)?
            .into_iter()
            .map(|c| c.into_iter().map(|i| basis.get(i).clone()).collect())
            .collect())
    }

    /// Same classes as index lists into the basis of `P`.
    pub fn steinmann_class_indices(&self, p: &Partition, r: &Partition) -> Result<Vec<Vec<usize>>> {
        let basis = self.basis(p)?;
        classes_of(&basis, r)
    }
}

impl fmt::Debug for Atlas {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Atlas(n={})", self.n)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            // smaller root wins so roots are class minima
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo;
        }
    }
}

fn classes_of(basis: &ShardBasis, r: &Partition) -> Result<Vec<Vec<usize>>> {
    let p = basis.partition();
    require_finer(p, r)?;
    let flat = basis.flat();
    let walls: Vec<usize> = (0..flat.num_keys())
        .filter(|i| !flat.key_is_r_semisimple(*i, r))
        .collect();
    let mut uf = UnionFind::new(basis.len());
    for (a, x) in basis.shards().iter().enumerate() {
        for &w in &walls {
            if let Some(b) = basis.index_of_bits(x.minus ^ (1u128 << w)) {
                uf.union(a, b);
            }
        }
    }
    let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
    for a in 0..basis.len() {
        let root = uf.find(a);
        by_root.entry(root).or_default().push(a);
    }
    let mut classes: Vec<Vec<usize>> = by_root.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    Ok(classes)
}

/// `Delta_R(X)` computed without an atlas.
pub fn project(r: &Partition, x: &Shard) -> Result<Vec<Shard>> {
    Atlas::new(r.n())?.project(r, x)
}

/// A non-`R`-semisimple key on which `X1` and `X2` differ, if that is the
/// only difference between them.
pub fn steinmann_adjacent(r: &Partition, x1: &Shard, x2: &Shard) -> Result<Option<Subset>> {
    if x1.support() != x2.support() {
        return Err(Error::SupportMismatch(
            format!("{:?}", x1.support()),
            format!("{:?}", x2.support()),
        ));
    }
    require_finer(x1.support(), r)?;
    let diff = x1.minus ^ x2.minus;
    if diff.count_ones() != 1 {
        return Ok(None);
    }
    let i = diff.trailing_zeros() as usize;
    if x1.flat.key_is_r_semisimple(i, r) {
        return Ok(None);
    }
    Ok(Some(x1.flat.keys()[i]))
}

pub fn steinmann_classes(p: &Partition, r: &Partition) -> Result<Vec<Vec<Shard>>> {
    Atlas::new(p.n())?.steinmann_classes(p, r)
}

/// One JSON line: `{"support":"(12|34)","signs":{"1":"+","13":"-"}}`.
pub fn shard_to_json(ground: &GroundSet, x: &Shard) -> serde_json::Value {
    let mut signs = serde_json::Map::new();
    for (i, k) in x.flat.keys().iter().enumerate() {
        signs.insert(
            ground.format_subset(*k),
            serde_json::Value::String(x.key_sign(i).symbol().to_string()),
        );
    }
    let mut obj = serde_json::Map::new();
    obj.insert(
        "support".into(),
        serde_json::Value::String(ground.format_partition(x.support())),
    );
    obj.insert("signs".into(), serde_json::Value::Object(signs));
    serde_json::Value::Object(obj)
}

/// Inverse of [`shard_to_json`]; accepts any subset as a sign key and
/// rejects sign vectors that are inconsistent or not realized.
pub fn shard_from_json(atlas: &Atlas, ground: &GroundSet, v: &serde_json::Value) -> Result<Shard> {
    let support = v
        .get("support")
        .and_then(|s| s.as_str())
        .ok_or_else(|| Error::Format("missing \"support\"".into()))?;
    let p = ground.parse_partition(support)?;
    let flat = atlas.flat(&p)?;
    let signs = v
        .get("signs")
        .and_then(|s| s.as_object())
        .ok_or_else(|| Error::Format("missing \"signs\"".into()))?;
    let mut known: Vec<Option<Sign>> = vec![None; flat.num_keys()];
    for (key, val) in signs {
        let e = ground.parse_subset(key)?;
        let s = match val.as_str() {
            Some("+") => Sign::Plus,
            Some("-") => Sign::Minus,
            _ => return Err(Error::Format(format!("bad sign for {:?}", key))),
        };
        let (i, same) = flat
            .class_of(e)
            .ok_or_else(|| Error::Format(format!("{:?} is empty modulo the support", key)))?;
        let s = if same { s } else { s.negate() };
        if known[i].is_some_and(|old| old != s) {
            return Err(Error::Format(format!("conflicting signs at {:?}", key)));
        }
        known[i] = Some(s);
    }
    let mut minus = 0u128;
    for (i, s) in known.iter().enumerate() {
        match s {
            None => {
                return Err(Error::Format(format!(
                    "missing sign for {}",
                    ground.format_subset(flat.keys()[i])
                )))
            }
            Some(Sign::Minus) => minus |= 1u128 << i,
            _ => {}
        }
    }
    let x = Shard::from_bits(flat, minus);
    atlas.locate(&x)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::numeric(n).unwrap()
    }

    #[test]
    fn keys_count_special_hyperplanes() {
        for n in 2..=6 {
            let f = Flat::new(Partition::one_block(n)).unwrap();
            assert_eq!(f.num_keys(), ((1 << n) - 2) / 2);
        }
        let f = Flat::new(Partition::singletons(3)).unwrap();
        assert_eq!(f.num_keys(), 0);
    }

    #[test]
    fn point_signs_n3() {
        let p = Partition::one_block(3);
        let x = shard_from_point(&p, &[rat(2), rat(-1), rat(-1)]).unwrap();
        let gr = g(3);
        let s = |t: &str| x.sign(gr.parse_subset(t).unwrap());
        assert_eq!(
            [s("1"), s("2"), s("3"), s("12"), s("13"), s("23")],
            [
                Sign::Plus,
                Sign::Minus,
                Sign::Minus,
                Sign::Plus,
                Sign::Plus,
                Sign::Minus
            ]
        );
    }

    #[test]
    fn point_errors() {
        let p = Partition::one_block(3);
        assert!(matches!(
            shard_from_point(&p, &[rat(1), rat(-1), rat(0)]),
            Err(Error::OnHyperplane(_))
        ));
        assert!(matches!(
            shard_from_point(&p, &[rat(1), rat(1), rat(0)]),
            Err(Error::NotInFlat(_))
        ));
        let x = shard_from_point(&Partition::singletons(2), &[rat(0), rat(0)]).unwrap();
        assert_eq!(x.flat().num_keys(), 0);
        let y = shard_from_point(&Partition::one_block(2), &[rat(1), rat(-1)]).unwrap();
        assert_eq!(y.sign(Subset(1)), Sign::Plus);
        assert_eq!(y.sign(Subset(2)), Sign::Minus);
        assert_eq!(y.sign(Subset(3)), Sign::Zero);
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_shards(&Partition::one_block(2)).unwrap().len(), 2);
        assert_eq!(enumerate_shards(&Partition::one_block(3)).unwrap().len(), 6);
        assert_eq!(
            enumerate_shards(&Partition::one_block(4)).unwrap().len(),
            32
        );
        assert_eq!(
            enumerate_shards(&Partition::singletons(4)).unwrap().len(),
            1
        );
    }

    #[test]
    fn bfs_matches_exhaustive_up_to_4() {
        for n in 1..=4 {
            for p in crate::ground::all_partitions(n) {
                let a = enumerate_shards(&p).unwrap();
                let b = enumerate_shards_exhaustive(&p).unwrap();
                assert_eq!(a, b, "{:?}", p);
            }
        }
    }

    #[test]
    fn seed_does_not_change_output() {
        let p = Partition::one_block(4);
        assert_eq!(
            enumerate_shards_seeded(&p, 1).unwrap(),
            enumerate_shards_seeded(&p, 99).unwrap()
        );
    }

    #[test]
    fn complement_consistency() {
        let atlas = Atlas::new(4).unwrap();
        for p in crate::ground::all_partitions(4) {
            for x in atlas.basis(&p).unwrap().shards() {
                for e in 1..15u64 {
                    let e = Subset(e);
                    let c = Subset::full(4).difference(e);
                    assert_eq!(x.sign(e), x.sign(c).negate());
                    let red = p.reduction(e);
                    assert_eq!(x.sign(e), x.sign(red));
                }
            }
        }
    }

    #[test]
    fn witnesses_reproduce_shards() {
        let atlas = Atlas::new(4).unwrap();
        for p in crate::ground::all_partitions(4) {
            let basis = atlas.basis(&p).unwrap();
            for x in basis.shards() {
                let h = x.witness().unwrap();
                assert_eq!(&shard_from_point_in(basis.flat(), &h).unwrap(), x);
            }
        }
    }

    #[test]
    fn projection_examples() {
        let atlas = Atlas::new(4).unwrap();
        let gr = g(4);
        let one = Partition::one_block(4);
        let x = atlas.basis(&one).unwrap().get(5).clone();
        assert_eq!(atlas.project(&one, &x).unwrap(), vec![x.clone()]);

        let zero = atlas
            .basis(&Partition::singletons(4))
            .unwrap()
            .get(0)
            .clone();
        let r = gr.parse_partition("(12|34)").unwrap();
        let parts = atlas.project(&r, &zero).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|s| s.flat().num_keys() == 0));

        let p = gr.parse_partition("(1|2|34)").unwrap();
        for x in atlas.basis(&p).unwrap().shards() {
            let parts = atlas.project(&r, x).unwrap();
            assert_eq!(parts[0].support(), &Partition::singletons(4));
            assert_eq!(parts[1].support(), &p);
            assert_eq!(
                parts[1].sign(Subset::singleton(2)),
                x.sign(Subset::singleton(2))
            );
            assert!(parts.iter().all(|s| s.is_realizable()));
        }
        assert!(matches!(
            atlas.project(&p, &atlas.basis(&r).unwrap().get(0).clone()),
            Err(Error::NotFiner { .. })
        ));
    }

    #[test]
    fn adjacency_and_classes_n4() {
        let atlas = Atlas::new(4).unwrap();
        let gr = g(4);
        let p = gr.parse_partition("(12|34)").unwrap();
        let basis = atlas.basis(&p).unwrap();
        assert_eq!(basis.len(), 8);
        let classes = atlas.steinmann_classes(&p, &p).unwrap();
        assert_eq!(classes.len(), 4);
        for c in &classes {
            assert_eq!(c.len(), 2);
            let e = steinmann_adjacent(&p, &c[0], &c[1]).unwrap().unwrap();
            let red = p.reduction(e);
            assert!(red.meets(Subset(0b0011)) && red.meets(Subset(0b1100)));
        }
        let x = basis.get(0);
        assert_eq!(steinmann_adjacent(&p, x, x).unwrap(), None);

        let zero = atlas
            .basis(&Partition::singletons(4))
            .unwrap()
            .get(0)
            .clone();
        assert_eq!(steinmann_adjacent(&p, &zero, &zero.clone()).unwrap(), None);
        assert!(steinmann_adjacent(&p, x, &zero).is_err());
    }

    #[test]
    fn classes_singletons_at_n3() {
        let p = Partition::one_block(3);
        let classes = steinmann_classes(&p, &p).unwrap();
        assert_eq!(classes.len(), 6);
        assert!(classes.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn json_round_trip() {
        let atlas = Atlas::new(4).unwrap();
        let gr = g(4);
        let p = gr.parse_partition("(12|34)").unwrap();
        for x in atlas.basis(&p).unwrap().shards() {
            let j = shard_to_json(&gr, x);
            assert_eq!(&shard_from_json(&atlas, &gr, &j).unwrap(), x);
        }
        let bad = serde_json::json!({"support": "(1234)", "signs": {"1": "+"}});
        assert!(shard_from_json(&atlas, &gr, &bad).is_err());
    }
}
