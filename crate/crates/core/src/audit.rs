//! Executable checks of the structural theorems at a fixed ground set size,
//! and the exponential generating function that predicts the dimension of
//! the Steinmann quotient.
//!
//! Every check is a function of in-memory objects that returns whether the
//! claim holds on one instance. A failing instance is recorded as a
//! [`Counterexample`], which [`replay`] feeds back into the same check.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arrangement::{
    enumerate_shards_exhaustive, shard_from_json, shard_to_json, Atlas, Shard, ShardBasis,
};
use crate::calculus::{
    arrow_forest, arrow_table, dual_forest_derivative, dual_forest_derivative_antisymmetrized,
    forest_derivative, Functional, ShardVector,
};
use crate::error::{Error, Result};
use crate::exactla::{rat, Rational, RationalMatrix, Rref, SparseVector};
use crate::forests::{
    all_forests, compose, cuts_of, format_forest, interleavings, layered_tree_cuts,
    parse_forest_over, relayerings, Cut, LayeredForest,
};
use crate::ground::{all_partitions, subset_partitions, GroundSet, Partition, Subset};
use crate::io::{functional_from_json, functional_to_json, vector_from_json, vector_to_json};
use crate::steinmann::{
    differentiability_violation, factorize, is_semisimple, is_semisimply_differentiable,
    is_semisimply_differentiable_exhaustive, product, product_over, projection_table, quotient_dim,
    semisimply_differentiable_basis, stein_subspace, steinmann_relations_on, QuotientSpace,
    RelationSet,
};

/// Largest ground set the audit accepts.
pub const MAX_AUDIT_N: usize = 5;
/// Largest ground set for the module suite.
pub const MAX_MODULE_N: usize = 4;
/// Instances drawn per sampled claim.
pub const SAMPLE_SIZE: usize = 1000;

// ---------------------------------------------------------------------------
// dimension oracle

/// Truncated exponential generating function with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgfSeries {
    coeffs: Vec<Rational>,
}

impl EgfSeries {
    pub fn new(coeffs: Vec<Rational>) -> EgfSeries {
        EgfSeries { coeffs }
    }

    /// Coefficients of `x^0 .. x^order`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn mul(&self, other: &EgfSeries) -> EgfSeries {
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        EgfSeries { coeffs: out }
    }

    /// `-log(2 - e^x) = sum_m u^m / m` with `u = e^x - 1`, up to `x^order`.
    pub fn zie(order: usize) -> EgfSeries {
        let mut u = vec![Rational::zero(); order + 1];
        let mut fact = BigInt::one();
        for (k, c) in u.iter_mut().enumerate().skip(1) {
            fact *= k;
            *c = Rational::new(BigInt::one(), fact.clone());
        }
        let u = EgfSeries::new(u);
        let mut power = u.clone();
        let mut total = vec![Rational::zero(); order + 1];
        for m in 1..=order {
            for (t, c) in total.iter_mut().zip(&power.coeffs) {
                *t += c / rat(m as i64);
            }
            power = power.mul(&u);
        }
        EgfSeries::new(total)
    }

    /// `n!` times the coefficient of `x^n`; fails unless it is an integer.
    pub fn dimension(&self, n: usize) -> Result<BigInt> {
        let c = self
            .coeffs
            .get(n)
            .ok_or(Error::UnsupportedSize(n, "up to the series order"))?;
        let fact: BigInt = (1..=n).fold(BigInt::one(), |acc, k| acc * k);
        let d = c * Rational::from_integer(fact);
        if !d.is_integer() {
            return Err(Error::Invariant(format!(
                "coefficient {} of x^{} is not integral",
                d, n
            )));
        }
        Ok(d.to_integer())
    }
}

/// Dimension of the degree `n` part of the free Lie algebra on the positive
/// exponential species.
pub fn zie_dimension(n: usize) -> Result<u64> {
    if !(1..=12).contains(&n) {
        return Err(Error::UnsupportedSize(n, "1..=12"));
    }
    EgfSeries::zie(n)
        .dimension(n)?
        .to_u64()
        .ok_or_else(|| Error::Invariant("dimension overflows u64".into()))
}

// ---------------------------------------------------------------------------
// report types

/// A forest together with the partition it starts from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestDoc {
    pub source: String,
    pub forest: String,
}

/// Which check a counterexample belongs to; fixes how its fields are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// dual derivatives of all `forests` at `shard` sum to zero
    VanishingSum,
    /// cut-by-cut and antisymmetrized evaluation of `forests[0]` agree at `shard`
    TwoPaths,
    /// `d_{T.F} = d_F d_T` on `data[0]`, with `forests = [T, F]`
    Functoriality,
    /// `shard^{forests[0]} = shard^{forests[1]}`
    PreLie,
    /// the stick forest on `partitions[0]` acts as the identity at `shard`
    Unit,
    /// `d*_{forests[0]}` maps the vector `data[0]` into the Stein subspace
    SteinPreserved,
    /// `forests[0]` and `forests[1]` agree at `shard` modulo the Stein subspace
    SteinDelayering,
    /// `d*_{T.F} D = d*_T(d*_F D)` modulo Stein subspaces, `forests = [T, F]`
    Action,
    /// search and exhaustive enumeration agree on `partitions[0]`
    Enumeration,
    /// classes over `partitions = [P, R]` span the kernel of the projection
    KernelRank,
    /// the projection over `partitions = [P, R]` hits every tensor basis element
    Surjectivity,
    /// quotient dimension equals the oracle
    Dimension,
    /// free shards complement the relation span
    Complement,
    /// derivative of a product equals product of derivatives
    Diagram,
    /// semisimply differentiable functionals over `partitions[0]` factor
    ProductIsomorphism,
    /// `data[0]` annihilates the relations iff its first derivatives are semisimple
    AnnihilatorDuality,
    /// `d_{forests[0]} data[0]` is semisimple
    MainTheorem,
    /// `data[0]` annihilates the relations or has a bad first derivative
    Converse,
    /// fast and exhaustive differentiability tests agree on `data[0]`
    DifferentiabilityPaths,
    /// `forests[0]` and `forests[1]` give the same derivative of `data[0]`
    Delayering,
    /// the two forests separate the zero-dimensional shard modulo Stein
    LayeringSensitivity,
    /// the claim stopped before reaching an instance; `detail` has the error
    Aborted,
}

/// A failing instance, in a form that [`replay`] can re-check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forests: Vec<ForestDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shard: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub data: Vec<Value>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Counterexample {
    fn new(kind: Kind) -> Counterexample {
        Counterexample {
            kind,
            partitions: Vec::new(),
            forests: Vec::new(),
            shard: None,
            data: Vec::new(),
            detail: String::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim: String,
    pub statement: String,
    pub n: usize,
    pub instances: u64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// sampled instances by shape, for claims that sample
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub census: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub suites: Vec<String>,
    pub claims: Vec<ClaimResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
    pub passed: bool,
}

impl AuditReport {
    fn assemble(
        n: usize,
        suites: &[Suite],
        mut claims: Vec<ClaimResult>,
        skipped: Vec<String>,
    ) -> AuditReport {
        claims.sort_by(|a, b| a.claim.cmp(&b.claim));
        let passed = claims.iter().all(|c| c.passed);
        AuditReport {
            n,
            suites: suites.iter().map(|s| s.name().to_string()).collect(),
            claims,
            skipped,
            passed,
        }
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.claim == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.claims.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        v.as_object_mut()
            .expect("object")
            .insert("schema".into(), Value::from(crate::io::SCHEMA));
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            let _ = writeln!(
                out,
                "{} {:<36} n={} instances={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.claim,
                c.n,
                c.instances
            );
            if let Some(cx) = &c.counterexample {
                let _ = writeln!(
                    out,
                    "     counterexample: {}",
                    serde_json::to_string(cx).expect("plain data")
                );
            }
        }
        for s in &self.skipped {
            let _ = writeln!(out, "SKIP {}", s);
        }
        let _ = writeln!(
            out,
            "{}: {} of {} claims hold at n={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.claims.iter().filter(|c| c.passed).count(),
            self.claims.len(),
            self.n
        );
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Lie,
    Module,
    Kernel,
    Factorization,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Lie,
        Suite::Module,
        Suite::Kernel,
        Suite::Factorization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lie => "lie",
            Suite::Module => "module",
            Suite::Kernel => "kernel",
            Suite::Factorization => "factorization",
        }
    }

    /// `"all"` expands to every suite.
    pub fn parse_list(text: &str) -> Result<Vec<Suite>> {
        match text {
            "all" => Ok(Suite::ALL.to_vec()),
            "lie" => Ok(vec![Suite::Lie]),
            "module" => Ok(vec![Suite::Module]),
            "kernel" => Ok(vec![Suite::Kernel]),
            "factorization" => Ok(vec![Suite::Factorization]),
            _ => Err(Error::Format(format!(
                "unknown suite {:?} (expected lie, module, kernel, factorization or all)",
                text
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// shared state

/// Atlas plus caches used by several claims.
pub struct Context<'a> {
    atlas: &'a Atlas,
    ground: GroundSet,
    stein: RwLock<HashMap<Partition, Arc<QuotientSpace>>>,
    relations: RwLock<HashMap<Subset, Arc<RelationSet>>>,
}

impl<'a> Context<'a> {
    pub fn new(atlas: &'a Atlas) -> Context<'a> {
        Context {
            atlas,
            ground: GroundSet::numeric(atlas.n()).expect("atlas sizes are valid ground sets"),
            stein: RwLock::new(HashMap::new()),
            relations: RwLock::new(HashMap::new()),
        }
    }

    pub fn atlas(&self) -> &Atlas {
        self.atlas
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn stein(&self, p: &Partition) -> Result<Arc<QuotientSpace>> {
        if let Some(k) = self.stein.read().expect("lock").get(p) {
            return Ok(k.clone());
        }
        let k = Arc::new(stein_subspace(self.atlas, p)?);
        Ok(self
            .stein
            .write()
            .expect("lock")
            .entry(p.clone())
            .or_insert(k)
            .clone())
    }

    fn relations(&self, block: Subset) -> Result<Arc<RelationSet>> {
        if let Some(r) = self.relations.read().expect("lock").get(&block) {
            return Ok(r.clone());
        }
        let r = Arc::new(steinmann_relations_on(self.atlas, block)?);
        Ok(self
            .relations
            .write()
            .expect("lock")
            .entry(block)
            .or_insert(r)
            .clone())
    }

    fn one_block(&self) -> Partition {
        Partition::one_block(self.atlas.n())
    }

    fn forest_doc(&self, f: &LayeredForest) -> ForestDoc {
        ForestDoc {
            source: self.ground.format_partition(f.source()),
            forest: format_forest(&self.ground, f),
        }
    }

    fn partition_doc(&self, p: &Partition) -> String {
        self.ground.format_partition(p)
    }

    fn read_forest(&self, d: &ForestDoc) -> Result<LayeredForest> {
        let p = self.ground.parse_partition(&d.source)?;
        parse_forest_over(&self.ground, &p, &d.forest)
    }
}

// ---------------------------------------------------------------------------
// checks: each returns whether the claim holds on one instance

fn unit_vector(atlas: &Atlas, x: &Shard) -> Result<ShardVector> {
    ShardVector::from_shard(atlas, x)
}

fn check_vanishing_sum(c: &Context, forests: &[LayeredForest], x: &Shard) -> Result<bool> {
    let xv = unit_vector(c.atlas, x)?;
    let mut total = ShardVector::zero(c.atlas.basis(forests[0].source())?);
    for f in forests {
        total = total.add(&dual_forest_derivative(c.atlas, f, &xv)?)?;
    }
    Ok(total.is_zero())
}

fn check_two_paths(c: &Context, f: &LayeredForest, x: &Shard) -> Result<bool> {
    let xv = unit_vector(c.atlas, x)?;
    Ok(dual_forest_derivative(c.atlas, f, &xv)?
        == dual_forest_derivative_antisymmetrized(c.atlas, f, &xv)?)
}

fn check_functoriality(
    c: &Context,
    t: &LayeredForest,
    f: &LayeredForest,
    g: &Functional,
) -> Result<bool> {
    let tf = compose(t, f)?;
    let direct = forest_derivative(c.atlas, &tf, g)?;
    let stepwise = forest_derivative(c.atlas, f, &forest_derivative(c.atlas, t, g)?)?;
    Ok(direct == stepwise)
}

fn check_pre_lie(c: &Context, f1: &LayeredForest, f2: &LayeredForest, x: &Shard) -> Result<bool> {
    Ok(arrow_forest(c.atlas, x, f1)? == arrow_forest(c.atlas, x, f2)?)
}

fn check_unit(c: &Context, p: &Partition, x: &Shard) -> Result<bool> {
    let id = LayeredForest::identity(p);
    let xv = unit_vector(c.atlas, x)?;
    let (basis, i) = c.atlas.locate(x)?;
    let ind = Functional::indicator(basis, i);
    Ok(dual_forest_derivative(c.atlas, &id, &xv)? == xv
        && forest_derivative(c.atlas, &id, &ind)? == ind)
}

fn check_stein_preserved(c: &Context, f: &LayeredForest, v: &ShardVector) -> Result<bool> {
    let k = c.stein(f.source())?;
    k.contains(&dual_forest_derivative(c.atlas, f, v)?)
}

fn check_stein_delayering(
    c: &Context,
    f: &LayeredForest,
    g: &LayeredForest,
    x: &Shard,
) -> Result<bool> {
    let xv = unit_vector(c.atlas, x)?;
    let k = c.stein(f.source())?;
    k.equivalent(
        &dual_forest_derivative(c.atlas, f, &xv)?,
        &dual_forest_derivative(c.atlas, g, &xv)?,
    )
}

fn check_action(c: &Context, t: &LayeredForest, f: &LayeredForest, d: &Shard) -> Result<bool> {
    let dv = unit_vector(c.atlas, d)?;
    let kp = c.stein(t.source())?;
    let kq = c.stein(f.source())?;
    let whole = kp.reduce(&dual_forest_derivative(c.atlas, &compose(t, f)?, &dv)?)?;
    let inner = kq.reduce(&dual_forest_derivative(c.atlas, f, &dv)?)?;
    let staged = kp.reduce(&dual_forest_derivative(c.atlas, t, &inner)?)?;
    Ok(whole == staged)
}

fn check_enumeration(c: &Context, p: &Partition) -> Result<bool> {
    let found: BTreeSet<Shard> = c.atlas.basis(p)?.shards().iter().cloned().collect();
    let oracle: BTreeSet<Shard> = enumerate_shards_exhaustive(p)?.into_iter().collect();
    Ok(found == oracle)
}

fn check_kernel_rank(c: &Context, p: &Partition, r: &Partition) -> Result<bool> {
    let basis = c.atlas.basis(p)?;
    let classes = c.atlas.steinmann_class_indices(p, r)?;
    let mut diffs = Vec::new();
    for class in &classes {
        for &b in &class[1..] {
            let mut v = SparseVector::unit(class[0]);
            v.set(b, -Rational::one());
            diffs.push(v);
        }
    }
    let span = Rref::from_rows(basis.len(), diffs.iter().cloned()).rank();
    // the projection sends each shard to one tensor basis element
    let (_, table) = projection_table(c.atlas, r, p)?;
    let mut rows: BTreeMap<&Vec<usize>, SparseVector> = BTreeMap::new();
    for (i, t) in table.iter().enumerate() {
        rows.entry(t).or_default().set(i, Rational::one());
    }
    let delta = RationalMatrix::from_rows(basis.len(), rows.into_values().collect());
    let kernel = delta.kernel_basis();
    let inside = diffs.iter().all(|d| {
        delta
            .mul_dense(&d.to_dense(basis.len()))
            .iter()
            .all(Zero::is_zero)
    });
    Ok(inside && span == kernel.len())
}

fn tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    dims.iter().fold(vec![Vec::new()], |acc, &d| {
        acc.iter()
            .flat_map(|t| {
                (0..d).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect()
    })
}

fn check_surjectivity(c: &Context, p: &Partition, r: &Partition) -> Result<bool> {
    let (bases, table) = projection_table(c.atlas, r, p)?;
    let hit: BTreeSet<&Vec<usize>> = table.iter().collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    Ok(tuples(&dims).iter().all(|t| hit.contains(t)))
}

fn check_dimension(c: &Context) -> Result<bool> {
    Ok(quotient_dim(c.atlas)? as u64 == zie_dimension(c.atlas.n())?)
}

fn check_complement(c: &Context) -> Result<bool> {
    let rel = c.relations(c.one_block().full())?;
    let len = rel.basis().len();
    let mut span = Rref::from_rows(
        len,
        rel.relations().iter().map(|r| r.vector.coeffs().clone()),
    );
    let free = rel.free_shards();
    let independent = free.iter().all(|&i| span.insert(SparseVector::unit(i)));
    Ok(independent && span.rank() == len && free.len() == rel.annihilator().len())
}

fn sub_forest(f: &LayeredForest, block: Subset) -> Result<LayeredForest> {
    let cuts = f
        .cuts()
        .iter()
        .filter(|c| c.parent.is_subset_of(block))
        .copied()
        .collect();
    LayeredForest::new(f.source().restrict_complete(block), cuts)
}

fn check_diagram(c: &Context, f: &LayeredForest, factors: &[Functional]) -> Result<bool> {
    let p = f.source();
    let lhs = forest_derivative(c.atlas, f, &product(c.atlas, p, factors)?)?;
    let parts = p
        .blocks()
        .iter()
        .zip(factors)
        .map(|(t, g)| forest_derivative(c.atlas, &sub_forest(f, *t)?, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(lhs == product_over(c.atlas, p, f.target(), &parts)?)
}

/// Pairs of basis indices adjacent across a wall that is not `r`-semisimple.
fn adjacent_pairs(basis: &ShardBasis, r: &Partition) -> Vec<(usize, usize)> {
    let flat = basis.flat();
    let walls: Vec<usize> = (0..flat.num_keys())
        .filter(|i| !flat.key_is_r_semisimple(*i, r))
        .collect();
    let mut out = Vec::new();
    for (a, x) in basis.shards().iter().enumerate() {
        for &w in &walls {
            if let Some(b) = basis.index_of(&x.flipped(w)) {
                if b > a {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

/// Linear conditions on the values of a functional over `p` saying that it
/// and all its first derivatives are semisimple.
fn differentiability_conditions(atlas: &Atlas, p: &Partition) -> Result<Vec<SparseVector>> {
    let basis = atlas.basis(p)?;
    let mut rows = Vec::new();
    for (a, b) in adjacent_pairs(&basis, p) {
        let mut v = SparseVector::unit(a);
        v.add_at(b, &-Rational::one());
        rows.push(v);
    }
    for cut in cuts_of(p) {
        let q = p.split(cut.parent, cut.left)?;
        let qb = atlas.basis(&q)?;
        let plus = arrow_table(atlas, &q, &cut)?;
        let minus = arrow_table(atlas, &q, &cut.reversed())?;
        for (a, b) in adjacent_pairs(&qb, &q) {
            let mut v = SparseVector::new();
            v.add_at(plus[a], &Rational::one());
            v.add_at(minus[a], &-Rational::one());
            v.add_at(plus[b], &-Rational::one());
            v.add_at(minus[b], &Rational::one());
            if !v.is_zero() {
                rows.push(v);
            }
        }
    }
    Ok(rows)
}

fn check_product_isomorphism(c: &Context, p: &Partition, seed: u64) -> Result<bool> {
    let len = c.atlas.basis(p)?.len();
    let conditions = differentiability_conditions(c.atlas, p)?;
    let solutions = len - Rref::from_rows(len, conditions.iter().cloned()).rank();
    let mut expected = 1;
    for b in p.blocks() {
        expected *= c.relations(*b)?.annihilator().len();
    }
    let products = semisimply_differentiable_basis(c.atlas, p)?;
    let rows: Vec<SparseVector> = products
        .iter()
        .map(|f| SparseVector::from_dense(f.values()))
        .collect();
    let independent = Rref::from_rows(len, rows.iter().cloned()).rank() == products.len();
    let solve = rows
        .iter()
        .all(|r| conditions.iter().all(|k| k.dot(r).is_zero()));
    // a generic element factors and expands back to itself
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![Rational::zero(); len];
    for f in &products {
        let w = rat(rng.gen_range(-3..=3));
        for (v, x) in values.iter_mut().zip(f.values()) {
            *v += &w * x;
        }
    }
    let g = Functional::new(c.atlas.basis(p)?, values)?;
    let round_trip = factorize(c.atlas, &g)?.expand(c.atlas, p)? == g;
    Ok(solutions == expected && products.len() == expected && independent && solve && round_trip)
}

fn annihilates(c: &Context, f: &Functional) -> Result<bool> {
    let rel = c.relations(c.one_block().full())?;
    for r in rel.relations() {
        if !f.eval_vector(&r.vector)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_annihilator_duality(c: &Context, f: &Functional) -> Result<bool> {
    Ok(annihilates(c, f)? == is_semisimply_differentiable(c.atlas, f)?)
}

fn check_main_theorem(c: &Context, forest: &LayeredForest, f: &Functional) -> Result<bool> {
    is_semisimple(&forest_derivative(c.atlas, forest, f)?, forest.target())
}

fn check_converse(c: &Context, f: &Functional) -> Result<bool> {
    Ok(annihilates(c, f)? || differentiability_violation(c.atlas, f)?.is_some())
}

fn check_differentiability_paths(c: &Context, f: &Functional) -> Result<bool> {
    Ok(is_semisimply_differentiable(c.atlas, f)?
        == is_semisimply_differentiable_exhaustive(c.atlas, f, None)?)
}

fn check_delayering(
    c: &Context,
    f: &LayeredForest,
    g: &LayeredForest,
    h: &Functional,
) -> Result<bool> {
    Ok(forest_derivative(c.atlas, f, h)? == forest_derivative(c.atlas, g, h)?)
}

fn check_layering_sensitivity(c: &Context, f1: &LayeredForest, f2: &LayeredForest) -> Result<bool> {
    let point = c.atlas.basis(f1.target())?;
    if point.len() != 1 {
        return Err(Error::Invariant("target is not a point".into()));
    }
    let x = ShardVector::from_coeffs(point, SparseVector::unit(0))?;
    let d1 = dual_forest_derivative(c.atlas, f1, &x)?;
    let d2 = dual_forest_derivative(c.atlas, f2, &x)?;
    let k = c.stein(f1.source())?;
    let agree = semisimply_differentiable_basis(c.atlas, f1.source())?
        .iter()
        .map(|h| Ok(h.eval_vector(&d1)? == h.eval_vector(&d2)?))
        .collect::<Result<Vec<bool>>>()?;
    Ok(d1 != d2 && k.equivalent(&d1, &d2)? && agree.iter().all(|a| *a))
}

// ---------------------------------------------------------------------------
// replay

/// Re-runs the check recorded in `cx`; `true` means it still fails.
pub fn replay(atlas: &Atlas, cx: &Counterexample) -> Result<bool> {
    let c = Context::new(atlas);
    holds(&c, cx).map(|ok| !ok)
}

fn holds(c: &Context, cx: &Counterexample) -> Result<bool> {
    let forests = cx
        .forests
        .iter()
        .map(|d| c.read_forest(d))
        .collect::<Result<Vec<_>>>()?;
    let partitions = cx
        .partitions
        .iter()
        .map(|p| c.ground.parse_partition(p))
        .collect::<Result<Vec<_>>>()?;
    let shard = cx
        .shard
        .as_ref()
        .map(|v| shard_from_json(c.atlas, &c.ground, v))
        .transpose()?;
    let need = |k: usize, what: &str, have: usize| {
        if have < k {
            Err(Error::Format(format!(
                "counterexample needs {} {}",
                k, what
            )))
        } else {
            Ok(())
        }
    };
    let fun = |i: usize| -> Result<Functional> {
        need(i + 1, "data entries", cx.data.len())?;
        functional_from_json(c.atlas, &c.ground, &cx.data[i])
    };
    let the_shard = || {
        shard
            .clone()
            .ok_or_else(|| Error::Format("counterexample needs a shard".into()))
    };
    match cx.kind {
        Kind::VanishingSum => {
            need(1, "forests", forests.len())?;
            check_vanishing_sum(c, &forests, &the_shard()?)
        }
        Kind::TwoPaths => {
            need(1, "forests", forests.len())?;
            check_two_paths(c, &forests[0], &the_shard()?)
        }
        Kind::Functoriality => {
            need(2, "forests", forests.len())?;
            check_functoriality(c, &forests[0], &forests[1], &fun(0)?)
        }
        Kind::PreLie => {
            need(2, "forests", forests.len())?;
            check_pre_lie(c, &forests[0], &forests[1], &the_shard()?)
        }
        Kind::Unit => {
            need(1, "partitions", partitions.len())?;
            check_unit(c, &partitions[0], &the_shard()?)
        }
        Kind::SteinPreserved => {
            need(1, "forests", forests.len())?;
            need(1, "data entries", cx.data.len())?;
            let v = vector_from_json(c.atlas, &c.ground, &cx.data[0])?;
            check_stein_preserved(c, &forests[0], &v)
        }
        Kind::SteinDelayering => {
            need(2, "forests", forests.len())?;
            check_stein_delayering(c, &forests[0], &forests[1], &the_shard()?)
        }
        Kind::Action => {
            need(2, "forests", forests.len())?;
            check_action(c, &forests[0], &forests[1], &the_shard()?)
        }
        Kind::Enumeration => {
            need(1, "partitions", partitions.len())?;
            check_enumeration(c, &partitions[0])
        }
        Kind::KernelRank => {
            need(2, "partitions", partitions.len())?;
            check_kernel_rank(c, &partitions[0], &partitions[1])
        }
        Kind::Surjectivity => {
            need(2, "partitions", partitions.len())?;
            check_surjectivity(c, &partitions[0], &partitions[1])
        }
        Kind::Dimension => check_dimension(c),
        Kind::Complement => check_complement(c),
        Kind::Diagram => {
            need(1, "forests", forests.len())?;
            let factors = (0..cx.data.len()).map(fun).collect::<Result<Vec<_>>>()?;
            check_diagram(c, &forests[0], &factors)
        }
        Kind::ProductIsomorphism => {
            need(1, "partitions", partitions.len())?;
            let seed = cx.detail.parse().unwrap_or(0);
            check_product_isomorphism(c, &partitions[0], seed)
        }
        Kind::AnnihilatorDuality => check_annihilator_duality(c, &fun(0)?),
        Kind::MainTheorem => {
            need(1, "forests", forests.len())?;
            check_main_theorem(c, &forests[0], &fun(0)?)
        }
        Kind::Converse => check_converse(c, &fun(0)?),
        Kind::DifferentiabilityPaths => check_differentiability_paths(c, &fun(0)?),
        Kind::Delayering => {
            need(2, "forests", forests.len())?;
            check_delayering(c, &forests[0], &forests[1], &fun(0)?)
        }
        Kind::LayeringSensitivity => {
            need(2, "forests", forests.len())?;
            check_layering_sensitivity(c, &forests[0], &forests[1])
        }
        Kind::Aborted => Err(Error::Format(format!("nothing to replay: {}", cx.detail))),
    }
}

// ---------------------------------------------------------------------------
// tallying

struct Tally {
    claim: &'static str,
    statement: &'static str,
    n: usize,
    instances: u64,
    counterexample: Option<Counterexample>,
    census: BTreeMap<String, u64>,
}

impl Tally {
    fn new(claim: &'static str, statement: &'static str, n: usize) -> Tally {
        Tally {
            claim,
            statement,
            n,
            instances: 0,
            counterexample: None,
            census: BTreeMap::new(),
        }
    }

    /// Counts one instance; on failure keeps the first counterexample.
    fn record<F: FnOnce() -> Counterexample>(&mut self, outcome: Result<bool>, cx: F) {
        self.instances += 1;
        let detail = match outcome {
            Ok(true) => return,
            Ok(false) => None,
            Err(e) => Some(e.to_string()),
        };
        if self.counterexample.is_none() {
            let mut c = cx();
            if let Some(d) = detail {
                c.detail = d;
            }
            self.counterexample = Some(c);
        }
    }

    fn count(&mut self, key: String) {
        *self.census.entry(key).or_insert(0) += 1;
    }

    fn finish(self) -> ClaimResult {
        ClaimResult {
            claim: self.claim.to_string(),
            statement: self.statement.to_string(),
            n: self.n,
            instances: self.instances,
            passed: self.counterexample.is_none(),
            counterexample: self.counterexample,
            census: self.census,
        }
    }
}

/// Runs `body`; an error that escapes it becomes a failed instance.
fn claim<F>(c: &Context, id: &'static str, statement: &'static str, body: F) -> ClaimResult
where
    F: FnOnce(&mut Tally) -> Result<()>,
{
    let mut t = Tally::new(id, statement, c.atlas.n());
    if let Err(e) = body(&mut t) {
        t.instances += 1;
        if t.counterexample.is_none() {
            let mut cx = Counterexample::new(Kind::Aborted);
            cx.detail = e.to_string();
            t.counterexample = Some(cx);
        }
    }
    t.finish()
}

fn forests_cx(c: &Context, kind: Kind, forests: &[&LayeredForest]) -> Counterexample {
    let mut cx = Counterexample::new(kind);
    cx.forests = forests.iter().map(|f| c.forest_doc(f)).collect();
    cx
}

fn with_shard(c: &Context, mut cx: Counterexample, x: &Shard) -> Counterexample {
    cx.shard = Some(shard_to_json(&c.ground, x));
    cx
}

fn with_functional(c: &Context, mut cx: Counterexample, f: &Functional) -> Counterexample {
    cx.data.push(functional_to_json(&c.ground, f));
    cx
}

fn partitions_cx(c: &Context, kind: Kind, ps: &[&Partition]) -> Counterexample {
    let mut cx = Counterexample::new(kind);
    cx.partitions = ps.iter().map(|p| c.partition_doc(p)).collect();
    cx
}

// ---------------------------------------------------------------------------
// bracket instances

/// `[T1, T2]` and `[T2, T1]` with the same layering of the subtrees.
fn antisymmetry_pair(
    p: &Partition,
    block: Subset,
    left: Subset,
    sub: &[Cut],
) -> Result<[LayeredForest; 2]> {
    let right = block.difference(left);
    let mk = |l: Subset| {
        let mut cuts = vec![Cut::new(block, l)?];
        cuts.extend_from_slice(sub);
        LayeredForest::new(p.clone(), cuts)
    };
    Ok([mk(left)?, mk(right)?])
}

/// The cyclic terms `[[L1,L2],L3]`, `[[L3,L1],L2]`, `[[L2,L3],L1]`.
fn jacobi_triple(p: &Partition, parts: [Subset; 3], sub: &[Cut]) -> Result<[LayeredForest; 3]> {
    let [a, b, c] = parts;
    let block = a.union(b).union(c);
    let mk = |x: Subset, y: Subset| {
        let mut cuts = vec![Cut::new(block, x.union(y))?, Cut::new(x.union(y), x)?];
        cuts.extend_from_slice(sub);
        LayeredForest::new(p.clone(), cuts)
    };
    Ok([mk(a, b)?, mk(c, a)?, mk(b, c)?])
}

/// Every layered tree on `part`, over every choice of leaves.
fn trees_on(part: Subset) -> Vec<Vec<Cut>> {
    subset_partitions(part)
        .iter()
        .flat_map(|leaves| layered_tree_cuts(leaves))
        .collect()
}

fn random_tree<R: Rng>(rng: &mut R, part: Subset) -> Vec<Cut> {
    let leaves = subset_partitions(part);
    let leaves = leaves.choose(rng).expect("at least one partition");
    let trees = layered_tree_cuts(leaves);
    trees.choose(rng).expect("at least one tree").clone()
}

fn random_interleaving<R: Rng>(rng: &mut R, lists: &[Vec<Cut>]) -> Vec<Cut> {
    // uniform over interleavings: pick the next list with weight its length
    let mut pos = vec![0; lists.len()];
    let total: usize = lists.iter().map(Vec::len).sum();
    let mut out = Vec::with_capacity(total);
    for left in (1..=total).rev() {
        let mut k = rng.gen_range(0..left);
        for (i, l) in lists.iter().enumerate() {
            let rem = l.len() - pos[i];
            if k < rem {
                out.push(l[pos[i]]);
                pos[i] += 1;
                break;
            }
            k -= rem;
        }
    }
    out
}

fn blocks_with_at_least(p: &Partition, k: usize) -> Vec<Subset> {
    p.blocks()
        .iter()
        .copied()
        .filter(|b| b.len() >= k)
        .collect()
}

/// Splits of `block` into two parts, the first holding the least element.
fn two_splits(block: Subset) -> Vec<Subset> {
    let m = Subset::singleton(block.min_element().expect("nonempty"));
    block
        .proper_nonempty_subsets()
        .filter(|l| m.is_subset_of(*l))
        .collect()
}

/// Splits of `block` into three parts, in both cyclic orders.
fn three_splits(block: Subset) -> Vec<[Subset; 3]> {
    let mut out = Vec::new();
    for parts in subset_partitions(block) {
        if parts.len() == 3 {
            out.push([parts[0], parts[1], parts[2]]);
            out.push([parts[0], parts[2], parts[1]]);
        }
    }
    out
}

fn shards_over(atlas: &Atlas, p: &Partition) -> Result<Arc<ShardBasis>> {
    atlas.basis(p)
}

// ---------------------------------------------------------------------------
// lie suite

const ANTISYMMETRY: &str = "dual derivatives of [T1,T2] and [T2,T1] sum to zero";
const JACOBI: &str = "cyclic sum of dual derivatives of [[T1,T2],T3] vanishes";
const TWO_PATHS: &str = "cut-by-cut dual derivative equals the antisymmetrized arrow sum";
const FUNCTORIALITY: &str = "derivative along a composite forest is the composite of derivatives";
const PRE_LIE: &str = "arrows satisfy X^[[A,B],C] = X^[[A,C],B] and X^[A,[B,C]] = X^[B,[A,C]]";

fn lie_suite(c: &Context) -> Vec<ClaimResult> {
    let n = c.atlas.n();
    let exhaustive = n <= 4;
    vec![
        claim(c, "lie.antisymmetry", ANTISYMMETRY, |t| {
            if exhaustive {
                for p in all_partitions(n) {
                    for block in blocks_with_at_least(&p, 2) {
                        for left in two_splits(block) {
                            let right = block.difference(left);
                            for tl in trees_on(left) {
                                for tr in trees_on(right) {
                                    for sub in interleavings(&[tl.clone(), tr.clone()]) {
                                        let fs = antisymmetry_pair(&p, block, left, &sub)?;
                                        for x in shards_over(c.atlas, fs[0].target())?.shards() {
                                            t.record(check_vanishing_sum(c, &fs, x), || {
                                                with_shard(
                                                    c,
                                                    forests_cx(
                                                        c,
                                                        Kind::VanishingSum,
                                                        &[&fs[0], &fs[1]],
                                                    ),
                                                    x,
                                                )
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(0x1_1ea5);
                let ps: Vec<Partition> = all_partitions(n)
                    .into_iter()
                    .filter(|p| !blocks_with_at_least(p, 2).is_empty())
                    .collect();
                for _ in 0..SAMPLE_SIZE {
                    let p = ps.choose(&mut rng).expect("nonempty");
                    let block = *blocks_with_at_least(p, 2)
                        .choose(&mut rng)
                        .expect("nonempty");
                    let left = *two_splits(block).choose(&mut rng).expect("nonempty");
                    let sub = {
                        let tl = random_tree(&mut rng, left);
                        let tr = random_tree(&mut rng, block.difference(left));
                        random_interleaving(&mut rng, &[tl, tr])
                    };
                    let fs = antisymmetry_pair(p, block, left, &sub)?;
                    let basis = shards_over(c.atlas, fs[0].target())?;
                    let x = basis.get(rng.gen_range(0..basis.len()));
                    t.count(format!("cuts={}", fs[0].num_cuts()));
                    t.record(check_vanishing_sum(c, &fs, x), || {
                        with_shard(c, forests_cx(c, Kind::VanishingSum, &[&fs[0], &fs[1]]), x)
                    });
                }
            }
            Ok(())
        }),
        claim(c, "lie.jacobi", JACOBI, |t| {
            if exhaustive {
                for p in all_partitions(n) {
                    for block in blocks_with_at_least(&p, 3) {
                        for parts in three_splits(block) {
                            let trees: Vec<Vec<Vec<Cut>>> =
                                parts.iter().map(|s| trees_on(*s)).collect();
                            for t0 in &trees[0] {
                                for t1 in &trees[1] {
                                    for t2 in &trees[2] {
                                        for sub in
                                            interleavings(&[t0.clone(), t1.clone(), t2.clone()])
                                        {
                                            let fs = jacobi_triple(&p, parts, &sub)?;
                                            for x in shards_over(c.atlas, fs[0].target())?.shards()
                                            {
                                                t.record(check_vanishing_sum(c, &fs, x), || {
                                                    with_shard(
                                                        c,
                                                        forests_cx(
                                                            c,
                                                            Kind::VanishingSum,
                                                            &[&fs[0], &fs[1], &fs[2]],
                                                        ),
                                                        x,
                                                    )
                                                });
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(0x1ac0b1);
                let ps: Vec<Partition> = all_partitions(n)
                    .into_iter()
                    .filter(|p| !blocks_with_at_least(p, 3).is_empty())
                    .collect();
                for _ in 0..SAMPLE_SIZE {
                    let p = ps.choose(&mut rng).expect("nonempty");
                    let block = *blocks_with_at_least(p, 3)
                        .choose(&mut rng)
                        .expect("nonempty");
                    let parts = *three_splits(block).choose(&mut rng).expect("nonempty");
                    let subs: Vec<Vec<Cut>> =
                        parts.iter().map(|s| random_tree(&mut rng, *s)).collect();
                    let sub = random_interleaving(&mut rng, &subs);
                    let fs = jacobi_triple(p, parts, &sub)?;
                    let basis = shards_over(c.atlas, fs[0].target())?;
                    let x = basis.get(rng.gen_range(0..basis.len()));
                    t.count(format!("cuts={}", fs[0].num_cuts()));
                    t.record(check_vanishing_sum(c, &fs, x), || {
                        with_shard(
                            c,
                            forests_cx(c, Kind::VanishingSum, &[&fs[0], &fs[1], &fs[2]]),
                            x,
                        )
                    });
                }
            }
            Ok(())
        }),
        claim(c, "lie.two-paths", TWO_PATHS, |t| {
            if exhaustive {
                for p in all_partitions(n) {
                    for f in all_forests(&p, 3) {
                        for x in shards_over(c.atlas, f.target())?.shards() {
                            t.record(check_two_paths(c, &f, x), || {
                                with_shard(c, forests_cx(c, Kind::TwoPaths, &[&f]), x)
                            });
                        }
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(0x2_9a75);
                let ps = all_partitions(n);
                for _ in 0..SAMPLE_SIZE {
                    let p = ps.choose(&mut rng).expect("nonempty");
                    let f = random_forest(&mut rng, p, 3)?;
                    let basis = shards_over(c.atlas, f.target())?;
                    let x = basis.get(rng.gen_range(0..basis.len()));
                    t.count(format!("cuts={}", f.num_cuts()));
                    t.record(check_two_paths(c, &f, x), || {
                        with_shard(c, forests_cx(c, Kind::TwoPaths, &[&f]), x)
                    });
                }
            }
            Ok(())
        }),
        claim(c, "lie.functoriality", FUNCTORIALITY, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xf0c7);
            if exhaustive {
                for p in all_partitions(n) {
                    let g = Functional::random(c.atlas.basis(&p)?, &mut rng, 9);
                    for first in all_forests(&p, 2) {
                        for second in all_forests(first.target(), 3 - first.num_cuts()) {
                            t.record(check_functoriality(c, &first, &second, &g), || {
                                with_functional(
                                    c,
                                    forests_cx(c, Kind::Functoriality, &[&first, &second]),
                                    &g,
                                )
                            });
                        }
                    }
                }
            } else {
                let ps = all_partitions(n);
                for _ in 0..SAMPLE_SIZE {
                    let p = ps.choose(&mut rng).expect("nonempty");
                    let first = random_forest(&mut rng, p, 2)?;
                    let second = random_forest(&mut rng, first.target(), 3 - first.num_cuts())?;
                    let g = Functional::random(c.atlas.basis(p)?, &mut rng, 9);
                    t.count(format!("cuts={}+{}", first.num_cuts(), second.num_cuts()));
                    t.record(check_functoriality(c, &first, &second, &g), || {
                        with_functional(
                            c,
                            forests_cx(c, Kind::Functoriality, &[&first, &second]),
                            &g,
                        )
                    });
                }
            }
            Ok(())
        }),
        claim(c, "lie.pre-lie", PRE_LIE, |t| {
            for p in all_partitions(n) {
                let bl = p.blocks();
                if bl.len() < 3 {
                    continue;
                }
                for x in shards_over(c.atlas, &p)?.shards() {
                    for (i, j, k) in ordered_triples(bl.len()) {
                        let (a, b, cc) = (bl[i], bl[j], bl[k]);
                        let all = a.union(b).union(cc);
                        let top = p.merge(a, b)?.merge(a.union(b), cc)?;
                        let tree =
                            |outer_left: Subset, inner_parent: Subset, inner_left: Subset| {
                                LayeredForest::new(
                                    top.clone(),
                                    vec![
                                        Cut::new(all, outer_left)?,
                                        Cut::new(inner_parent, inner_left)?,
                                    ],
                                )
                            };
                        let pairs = [
                            (
                                tree(a.union(b), a.union(b), a)?,
                                tree(a.union(cc), a.union(cc), a)?,
                            ),
                            (tree(a, b.union(cc), b)?, tree(b, a.union(cc), a)?),
                        ];
                        for (f1, f2) in &pairs {
                            t.record(check_pre_lie(c, f1, f2, x), || {
                                with_shard(c, forests_cx(c, Kind::PreLie, &[f1, f2]), x)
                            });
                        }
                    }
                }
            }
            Ok(())
        }),
    ]
}

fn ordered_triples(k: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if a != b && b != c && a != c {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

fn random_forest<R: Rng>(rng: &mut R, p: &Partition, max_cuts: usize) -> Result<LayeredForest> {
    let mut f = LayeredForest::identity(p);
    let k = rng.gen_range(0..=max_cuts);
    for _ in 0..k {
        let cuts = cuts_of(f.target());
        match cuts.choose(rng) {
            Some(cut) => f = f.then(*cut)?,
            None => break,
        }
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// module suite

const UNIT: &str = "forests of sticks act as the identity";
const STEIN_PRESERVED: &str = "dual derivatives map Stein subspaces into Stein subspaces";
const STEIN_DELAYERING: &str = "relayerings of a forest agree modulo the Stein subspace";
const ACTION: &str = "the action of a composite equals the composite action on Stein cosets";

fn module_suite(c: &Context) -> Vec<ClaimResult> {
    let n = c.atlas.n();
    vec![
        claim(c, "module.unit", UNIT, |t| {
            for p in all_partitions(n) {
                for x in shards_over(c.atlas, &p)?.shards() {
                    t.record(check_unit(c, &p, x), || {
                        with_shard(c, partitions_cx(c, Kind::Unit, &[&p]), x)
                    });
                }
            }
            Ok(())
        }),
        claim(c, "module.stein-preserved", STEIN_PRESERVED, |t| {
            for p in all_partitions(n) {
                for f in all_forests(&p, 3) {
                    if f.is_identity() {
                        continue;
                    }
                    for v in c.stein(f.target())?.generators() {
                        t.record(check_stein_preserved(c, &f, &v), || {
                            let mut cx = forests_cx(c, Kind::SteinPreserved, &[&f]);
                            cx.data.push(vector_to_json(&c.ground, &v));
                            cx
                        });
                    }
                }
            }
            Ok(())
        }),
        claim(c, "module.stein-delayering", STEIN_DELAYERING, |t| {
            for p in all_partitions(n) {
                for f in all_forests(&p, 3) {
                    for g in relayerings(&f) {
                        if g.cuts() <= f.cuts() {
                            continue;
                        }
                        for x in shards_over(c.atlas, f.target())?.shards() {
                            t.record(check_stein_delayering(c, &f, &g, x), || {
                                with_shard(c, forests_cx(c, Kind::SteinDelayering, &[&f, &g]), x)
                            });
                        }
                    }
                }
            }
            Ok(())
        }),
        claim(c, "module.action", ACTION, |t| {
            for p in all_partitions(n) {
                for first in all_forests(&p, 3) {
                    for second in all_forests(first.target(), 3 - first.num_cuts()) {
                        for d in shards_over(c.atlas, second.target())?.shards() {
                            t.record(check_action(c, &first, &second, d), || {
                                with_shard(c, forests_cx(c, Kind::Action, &[&first, &second]), d)
                            });
                        }
                    }
                }
            }
            Ok(())
        }),
    ]
}

// ---------------------------------------------------------------------------
// kernel suite

const ENUMERATION: &str = "shard search agrees with the exhaustive sign-pattern oracle";
const KERNEL_RANK: &str = "Steinmann R-adjacency classes span the kernel of the projection to R";
const SURJECTIVITY: &str = "projection onto the blocks of R hits every tensor basis element";
const DIMENSION: &str = "quotient dimension equals n! [x^n] -log(2 - e^x)";
const COMPLEMENT: &str = "free shards complement the relation span";

fn finer_pairs(n: usize) -> Vec<(Partition, Partition)> {
    let all = all_partitions(n);
    let mut out = Vec::new();
    for p in &all {
        for r in &all {
            if p.is_finer(r).unwrap_or(false) {
                out.push((p.clone(), r.clone()));
            }
        }
    }
    out
}

fn kernel_suite(c: &Context) -> Vec<ClaimResult> {
    let n = c.atlas.n();
    let mut out = Vec::new();
    if n <= 4 {
        out.push(claim(c, "kernel.enumeration", ENUMERATION, |t| {
            for p in all_partitions(n) {
                t.record(check_enumeration(c, &p), || {
                    partitions_cx(c, Kind::Enumeration, &[&p])
                });
            }
            Ok(())
        }));
    }
    out.push(claim(c, "kernel.rank", KERNEL_RANK, |t| {
        for (p, r) in finer_pairs(n) {
            t.record(check_kernel_rank(c, &p, &r), || {
                partitions_cx(c, Kind::KernelRank, &[&p, &r])
            });
        }
        Ok(())
    }));
    out.push(claim(c, "kernel.surjectivity", SURJECTIVITY, |t| {
        for (p, r) in finer_pairs(n) {
            t.record(check_surjectivity(c, &p, &r), || {
                partitions_cx(c, Kind::Surjectivity, &[&p, &r])
            });
        }
        Ok(())
    }));
    out.push(claim(c, "kernel.dimension", DIMENSION, |t| {
        t.record(check_dimension(c), || Counterexample::new(Kind::Dimension));
        Ok(())
    }));
    out.push(claim(c, "kernel.complement", COMPLEMENT, |t| {
        t.record(check_complement(c), || {
            Counterexample::new(Kind::Complement)
        });
        Ok(())
    }));
    out
}

// ---------------------------------------------------------------------------
// factorization suite

const DIAGRAM: &str = "derivative of a product is the product of block derivatives";
const PRODUCT_ISO: &str =
    "semisimply differentiable functionals are the products of block annihilators";
const DUALITY: &str = "annihilating the relations is equivalent to semisimple first derivatives";
const MAIN: &str = "annihilator functionals have semisimple forest derivatives";
const CONVERSE: &str = "a functional outside the annihilator has a non-semisimple first derivative";
const PATHS: &str = "first-derivative and all-forest differentiability tests agree";
const DELAYERING: &str = "derivatives of annihilator functionals ignore the layering";
const SENSITIVITY: &str =
    "two layerings of [[1,2],[3,4]] differ on the point shard but agree modulo Stein";

fn diagram_factors(c: &Context, p: &Partition) -> Result<Vec<Vec<Functional>>> {
    let bases = p
        .blocks()
        .iter()
        .map(|t| c.atlas.basis(&p.restrict_complete(*t)))
        .collect::<Result<Vec<_>>>()?;
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    Ok(tuples(&dims)
        .into_iter()
        .map(|idx| {
            idx.iter()
                .zip(&bases)
                .map(|(i, b)| Functional::indicator(b.clone(), *i))
                .collect()
        })
        .collect())
}

fn annihilator_combination<R: Rng>(basis: &[Functional], rng: &mut R) -> Functional {
    let len = basis[0].values().len();
    let mut values = vec![Rational::zero(); len];
    for f in basis {
        let w = rat(rng.gen_range(-5..=5));
        for (v, x) in values.iter_mut().zip(f.values()) {
            *v += &w * x;
        }
    }
    Functional::new(basis[0].basis().clone(), values).expect("same basis")
}

fn factorization_suite(c: &Context) -> Vec<ClaimResult> {
    let n = c.atlas.n();
    let top = c.one_block();
    let mut out = Vec::new();
    out.push(claim(c, "factorization.diagram", DIAGRAM, |t| {
        let record = |t: &mut Tally, f: &LayeredForest, factors: &[Functional]| {
            t.record(check_diagram(c, f, factors), || {
                let mut cx = forests_cx(c, Kind::Diagram, &[f]);
                cx.data = factors
                    .iter()
                    .map(|g| functional_to_json(&c.ground, g))
                    .collect();
                cx
            });
        };
        if n <= 4 {
            for p in all_partitions(n) {
                let factor_sets = diagram_factors(c, &p)?;
                for f in all_forests(&p, 3) {
                    for factors in &factor_sets {
                        record(t, &f, factors);
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0xd1a9);
            let ps = all_partitions(n);
            for _ in 0..SAMPLE_SIZE {
                let p = ps.choose(&mut rng).expect("nonempty");
                let f = random_forest(&mut rng, p, 3)?;
                let factors = p
                    .blocks()
                    .iter()
                    .map(|b| {
                        Ok(Functional::random(
                            c.atlas.basis(&p.restrict_complete(*b))?,
                            &mut rng,
                            9,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                t.count(format!("blocks={},cuts={}", p.num_blocks(), f.num_cuts()));
                record(t, &f, &factors);
            }
        }
        Ok(())
    }));
    out.push(claim(
        c,
        "factorization.product-isomorphism",
        PRODUCT_ISO,
        |t| {
            for (i, p) in all_partitions(n).iter().enumerate() {
                let seed = 0x150 + i as u64;
                t.record(check_product_isomorphism(c, p, seed), || {
                    let mut cx = partitions_cx(c, Kind::ProductIsomorphism, &[p]);
                    cx.detail = seed.to_string();
                    cx
                });
            }
            Ok(())
        },
    ));
    out.push(claim(
        c,
        "factorization.annihilator-duality",
        DUALITY,
        |t| {
            let ann = c.relations(top.full())?.annihilator();
            let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
            let mut tests = ann.clone();
            for _ in 0..8 {
                tests.push(annihilator_combination(&ann, &mut rng));
                tests.push(Functional::random(c.atlas.basis(&top)?, &mut rng, 9));
            }
            for f in &tests {
                t.record(check_annihilator_duality(c, f), || {
                    with_functional(c, Counterexample::new(Kind::AnnihilatorDuality), f)
                });
            }
            Ok(())
        },
    ));
    out.push(claim(c, "factorization.main-theorem", MAIN, |t| {
        let ann = c.relations(top.full())?.annihilator();
        for f in &ann {
            let mut failed: Option<LayeredForest> = None;
            crate::steinmann::walk_forest_derivatives(c.atlas, f, 3, &mut |forest, d| {
                t.instances += 1;
                if !is_semisimple(d, forest.target())? {
                    failed = Some(forest.clone());
                    return Ok(false);
                }
                Ok(true)
            })?;
            if let Some(forest) = failed {
                t.instances -= 1;
                t.record(check_main_theorem(c, &forest, f), || {
                    with_functional(c, forests_cx(c, Kind::MainTheorem, &[&forest]), f)
                });
            }
        }
        Ok(())
    }));
    out.push(claim(c, "factorization.converse", CONVERSE, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0e5);
        let basis = c.atlas.basis(&top)?;
        for _ in 0..16 {
            let f = Functional::random(basis.clone(), &mut rng, 9);
            if annihilates(c, &f)? {
                continue;
            }
            t.record(check_converse(c, &f), || {
                with_functional(c, Counterexample::new(Kind::Converse), &f)
            });
        }
        Ok(())
    }));
    if n <= 4 {
        out.push(claim(
            c,
            "factorization.differentiability-paths",
            PATHS,
            |t| {
                let mut rng = ChaCha8Rng::seed_from_u64(0x9a75);
                for p in all_partitions(n) {
                    let sd = semisimply_differentiable_basis(c.atlas, &p)?;
                    let basis = c.atlas.basis(&p)?;
                    let mut tests = vec![annihilator_combination(&sd, &mut rng)];
                    for i in 0..basis.len().min(4) {
                        let mut g = annihilator_combination(&sd, &mut rng);
                        let mut v = g.values().to_vec();
                        v[i] += Rational::one();
                        g = Functional::new(basis.clone(), v)?;
                        tests.push(g);
                    }
                    tests.push(Functional::random(basis.clone(), &mut rng, 9));
                    for f in &tests {
                        t.record(check_differentiability_paths(c, f), || {
                            with_functional(c, Counterexample::new(Kind::DifferentiabilityPaths), f)
                        });
                    }
                }
                Ok(())
            },
        ));
    }
    out.push(claim(c, "factorization.delayering", DELAYERING, |t| {
        let functionals = c.relations(top.full())?.annihilator();
        for f in all_forests(&top, 3) {
            if f.layering_is_forced() {
                continue;
            }
            for g in relayerings(&f) {
                if g.cuts() <= f.cuts() {
                    continue;
                }
                for h in &functionals {
                    t.record(check_delayering(c, &f, &g, h), || {
                        with_functional(c, forests_cx(c, Kind::Delayering, &[&f, &g]), h)
                    });
                }
            }
        }
        Ok(())
    }));
    if n >= 4 {
        out.push(claim(
            c,
            "factorization.layering-sensitivity",
            SENSITIVITY,
            |t| {
                let quad = Subset::from_indices(0..4);
                let p = Partition::completed_with_singletons(n, &[quad])?;
                let (a, b) = (Subset::from_indices([0, 1]), Subset::from_indices([2, 3]));
                let base = vec![Cut::new(quad, a)?];
                let pair = |first: Subset, second: Subset| {
                    let mut cuts = base.clone();
                    cuts.push(Cut::new(
                        first,
                        Subset::singleton(first.min_element().expect("nonempty")),
                    )?);
                    cuts.push(Cut::new(
                        second,
                        Subset::singleton(second.min_element().expect("nonempty")),
                    )?);
                    LayeredForest::new(p.clone(), cuts)
                };
                let f1 = pair(a, b)?;
                let f2 = pair(b, a)?;
                t.record(check_layering_sensitivity(c, &f1, &f2), || {
                    forests_cx(c, Kind::LayeringSensitivity, &[&f1, &f2])
                });
                Ok(())
            },
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// entry points

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::UnsupportedSize(
            n,
            if max == 4 { "1..=4" } else { "1..=5" },
        ));
    }
    Ok(())
}

fn run(c: &Context, suite: Suite) -> Vec<ClaimResult> {
    match suite {
        Suite::Lie => lie_suite(c),
        Suite::Module => module_suite(c),
        Suite::Kernel => kernel_suite(c),
        Suite::Factorization => factorization_suite(c),
    }
}

/// Runs `suites` against a shared atlas, in parallel where threads exist.
/// The module suite is skipped above its size limit and noted as such.
pub fn run_suites(atlas: &Atlas, suites: &[Suite]) -> Result<AuditReport> {
    let n = atlas.n();
    check_n(n, MAX_AUDIT_N)?;
    let mut skipped = Vec::new();
    let active: Vec<Suite> = suites
        .iter()
        .copied()
        .filter(|s| {
            let ok = *s != Suite::Module || n <= MAX_MODULE_N;
            if !ok {
                skipped.push(format!("{} (n > {})", s.name(), MAX_MODULE_N));
            }
            ok
        })
        .collect();
    let c = Context::new(atlas);
    let claims: Vec<ClaimResult> = if cfg!(target_arch = "wasm32") || active.len() < 2 {
        active.iter().flat_map(|s| run(&c, *s)).collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = active.iter().map(|s| scope.spawn(|| run(&c, *s))).collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("suite thread panicked"))
                .collect()
        })
    };
    Ok(AuditReport::assemble(n, suites, claims, skipped))
}

/// Antisymmetry, Jacobi and the supporting identities.
pub fn verify_lie_axioms(n: usize) -> Result<AuditReport> {
    check_n(n, MAX_AUDIT_N)?;
    run_suites(&Atlas::new(n)?, &[Suite::Lie])
}

/// Unit and action identities on Stein cosets.
pub fn verify_module_axioms(n: usize) -> Result<AuditReport> {
    check_n(n, MAX_MODULE_N)?;
    run_suites(&Atlas::new(n)?, &[Suite::Module])
}

/// Every suite.
pub fn full_audit(n: usize) -> Result<AuditReport> {
    check_n(n, MAX_AUDIT_N)?;
    run_suites(&Atlas::new(n)?, &Suite::ALL)
}
