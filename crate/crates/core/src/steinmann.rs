//! Steinmann relations, the quotient they define, semisimplicity tests,
//! products of functionals and factorization.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::arrangement::{Atlas, ShardBasis};
use crate::calculus::{cut_derivative, forest_derivative, Functional, ShardVector};
use crate::error::{Error, Result};
use crate::exactla::{Rational, RationalMatrix, Rref, SparseVector};
use crate::forests::{cuts_of, Cut, LayeredForest};
use crate::ground::{Partition, Subset};

/// One four-term relation and where it came from.
#[derive(Clone, Debug)]
pub struct Relation {
    pub cut: Cut,
    /// basis indices of the adjacent pair over the target of `cut`
    pub pair: (usize, usize),
    pub vector: ShardVector,
}

/// Steinmann relations on the maximal shards of one block.
#[derive(Clone, Debug)]
pub struct RelationSet {
    basis: Arc<ShardBasis>,
    relations: Vec<Relation>,
}

impl RelationSet {
    pub fn basis(&self) -> &Arc<ShardBasis> {
        &self.basis
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(
            self.basis.len(),
            self.relations
                .iter()
                .map(|r| r.vector.coeffs().clone())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }

    /// A basis of the functionals vanishing on every relation, each one
    /// equal to 1 on its own free shard and 0 on the other free shards.
    pub fn annihilator(&self) -> Vec<Functional> {
        self.quotient()
            .rref
            .kernel_basis()
            .into_iter()
            .map(|v| {
                Functional::new(self.basis.clone(), v.to_dense(self.basis.len()))
                    .expect("kernel vectors have full length")
            })
            .collect()
    }

    /// Free shard of each annihilator basis vector, in the same order.
    pub fn free_shards(&self) -> Vec<usize> {
        let q = self.quotient();
        let pivots: HashSet<usize> = q.rref.pivot_columns().collect();
        (0..self.basis.len())
            .filter(|c| !pivots.contains(c))
            .collect()
    }

    pub fn quotient(&self) -> QuotientSpace {
        let rref = Rref::from_rows(
            self.basis.len(),
            self.relations.iter().map(|r| r.vector.coeffs().clone()),
        );
        QuotientSpace {
            basis: self.basis.clone(),
            rref,
        }
    }
}

/// Shard vectors modulo the span of a relation set.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    basis: Arc<ShardBasis>,
    rref: Rref,
}

impl QuotientSpace {
    pub fn spanned_by<I: IntoIterator<Item = SparseVector>>(
        basis: Arc<ShardBasis>,
        vectors: I,
    ) -> QuotientSpace {
        let rref = Rref::from_rows(basis.len(), vectors);
        QuotientSpace { basis, rref }
    }

    pub fn basis(&self) -> &Arc<ShardBasis> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.rref.rank()
    }

    /// Echelon basis of the subspace being divided out.
    pub fn generators(&self) -> Vec<ShardVector> {
        self.rref
            .rows()
            .map(|r| ShardVector::from_coeffs(self.basis.clone(), r.clone()).expect("same basis"))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.basis.len() - self.rref.rank()
    }

    /// Canonical coset representative, supported on non-pivot shards.
    pub fn reduce(&self, v: &ShardVector) -> Result<ShardVector> {
        self.check(v)?;
        ShardVector::from_coeffs(self.basis.clone(), self.rref.reduce(v.coeffs()))
    }

    pub fn contains(&self, v: &ShardVector) -> Result<bool> {
        self.check(v)?;
        Ok(self.rref.contains(v.coeffs()))
    }

    pub fn equivalent(&self, a: &ShardVector, b: &ShardVector) -> Result<bool> {
        self.contains(&a.sub(b)?)
    }

    fn check(&self, v: &ShardVector) -> Result<()> {
        if v.support() != self.basis.partition() {
            return Err(Error::SupportMismatch(
                format!("{:?}", v.support()),
                format!("{:?}", self.basis.partition()),
            ));
        }
        Ok(())
    }
}

/// Relations over the whole ground set.
pub fn steinmann_relations(atlas: &Atlas) -> Result<RelationSet> {
    steinmann_relations_on(atlas, Subset::full(atlas.n()))
}

/// Relations on the shards of `(block|singletons)`: for each cut of `block`
/// into parts of size at least two, and each Steinmann-adjacent pair over
/// the cut's target, the vector `X1^V - X1^Vbar + X2^Vbar - X2^V`.
/// Deduplicated up to sign, in a fixed order.
pub fn steinmann_relations_on(atlas: &Atlas, block: Subset) -> Result<RelationSet> {
    let p = Partition::completed_with_singletons(atlas.n(), &[block])?;
    let basis = atlas.basis(&p)?;
    let mut seen: HashSet<SparseVector> = HashSet::new();
    let mut relations = Vec::new();
    for cut in cuts_of(&p) {
        if cut.left.len() < 2 || cut.right().len() < 2 {
            continue;
        }
        let q = p.split(cut.parent, cut.left)?;
        let qb = atlas.basis(&q)?;
        let flat = qb.flat().clone();
        let walls: Vec<usize> = (0..flat.num_keys())
            .filter(|i| !flat.key_is_r_semisimple(*i, &q))
            .collect();
        for (a, x1) in qb.shards().iter().enumerate() {
            for &w in &walls {
                let b = match qb.index_of(&x1.flipped(w)) {
                    Some(b) if b > a => b,
                    _ => continue,
                };
                let xa = ShardVector::from_coeffs(qb.clone(), SparseVector::unit(a))?;
                let xb = ShardVector::from_coeffs(qb.clone(), SparseVector::unit(b))?;
                let d1 = crate::calculus::dual_cut_derivative(atlas, &cut, &xa)?;
                let d2 = crate::calculus::dual_cut_derivative(atlas, &cut, &xb)?;
                let v = d1.sub(&d2)?;
                if v.is_zero() {
                    continue;
                }
                let key = normalized(v.coeffs());
                if seen.insert(key) {
                    relations.push(Relation {
                        cut,
                        pair: (a, b),
                        vector: v,
                    });
                }
            }
        }
    }
    Ok(RelationSet { basis, relations })
}

fn normalized(v: &SparseVector) -> SparseVector {
    match v.leading() {
        Some((_, c)) if c.is_negative() => -v,
        _ => v.clone(),
    }
}

/// `#maximal shards - rank(Stein[I])`.
pub fn quotient_dim(atlas: &Atlas) -> Result<usize> {
    let rel = steinmann_relations(atlas)?;
    Ok(rel.basis().len() - rel.rank())
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

/// Two Steinmann `R`-adjacent shards (basis indices) on which `f` differs.
pub fn semisimplicity_violation(f: &Functional, r: &Partition) -> Result<Option<(usize, usize)>> {
    let basis = f.basis();
    require_finer(basis.partition(), r)?;
    let flat = basis.flat();
    let walls: Vec<usize> = (0..flat.num_keys())
        .filter(|i| !flat.key_is_r_semisimple(*i, r))
        .collect();
    for (a, x) in basis.shards().iter().enumerate() {
        for &w in &walls {
            if let Some(b) = basis.index_of(&x.flipped(w)) {
                if b > a && f.value(a) != f.value(b) {
                    return Ok(Some((a, b)));
                }
            }
        }
    }
    Ok(None)
}

/// Constant on Steinmann `R`-classes.
pub fn is_semisimple(f: &Functional, r: &Partition) -> Result<bool> {
    Ok(semisimplicity_violation(f, r)?.is_none())
}

/// A first derivative (or `f` itself, as the identity forest) that is not
/// semisimple.
pub fn differentiability_violation(atlas: &Atlas, f: &Functional) -> Result<Option<LayeredForest>> {
    let p = f.support().clone();
    if !is_semisimple(f, &p)? {
        return Ok(Some(LayeredForest::identity(&p)));
    }
    for cut in cuts_of(&p) {
        let q = p.split(cut.parent, cut.left)?;
        let d = cut_derivative(atlas, &cut, f, &q)?;
        if !is_semisimple(&d, &q)? {
            return Ok(Some(LayeredForest::single(&p, cut)?));
        }
    }
    Ok(None)
}

/// Fast test: `f` and all its first derivatives are semisimple.
pub fn is_semisimply_differentiable(atlas: &Atlas, f: &Functional) -> Result<bool> {
    Ok(differentiability_violation(atlas, f)?.is_none())
}

/// Calls `visit` with every forest out of `f`'s support having at most
/// `max_cuts` cuts and the corresponding derivative; derivatives of common
/// prefixes are shared. Stops early when `visit` returns `false`.
pub fn walk_forest_derivatives<V>(
    atlas: &Atlas,
    f: &Functional,
    max_cuts: usize,
    visit: &mut V,
) -> Result<bool>
where
    V: FnMut(&LayeredForest, &Functional) -> Result<bool>,
{
    fn go<V>(
        atlas: &Atlas,
        forest: &LayeredForest,
        g: &Functional,
        left: usize,
        visit: &mut V,
    ) -> Result<bool>
    where
        V: FnMut(&LayeredForest, &Functional) -> Result<bool>,
    {
        if !visit(forest, g)? {
            return Ok(false);
        }
        if left == 0 {
            return Ok(true);
        }
        for cut in cuts_of(forest.target()) {
            let next = forest.then(cut)?;
            let d = cut_derivative(atlas, &cut, g, next.target())?;
            if !go(atlas, &next, &d, left - 1, visit)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
    let id = LayeredForest::identity(f.support());
    go(atlas, &id, f, max_cuts, visit)
}

/// Definition-level test: every forest derivative with at most `max_cuts`
/// cuts (all forests when `None`) is semisimple.
pub fn is_semisimply_differentiable_exhaustive(
    atlas: &Atlas,
    f: &Functional,
    max_cuts: Option<usize>,
) -> Result<bool> {
    let p = f.support();
    let depth = max_cuts.unwrap_or(p.n() - p.num_blocks());
    walk_forest_derivatives(atlas, f, depth, &mut |forest, d| {
        is_semisimple(d, forest.target())
    })
}

/// Component bases, and per shard the basis index of each projection.
pub type ProjectionTable = (Vec<Arc<ShardBasis>>, Vec<Vec<usize>>);

/// For every shard over `p`, the basis indices of its projections onto the
/// blocks of `r`; also returns the component bases.
pub fn projection_table(atlas: &Atlas, r: &Partition, p: &Partition) -> Result<ProjectionTable> {
    require_finer(p, r)?;
    let bases = r
        .blocks()
        .iter()
        .map(|t| atlas.basis(&p.restrict_complete(*t)))
        .collect::<Result<Vec<_>>>()?;
    let table = atlas
        .basis(p)?
        .shards()
        .iter()
        .map(|x| {
            atlas
                .project(r, x)?
                .iter()
                .zip(&bases)
                .map(|(y, b)| {
                    b.index_of(y).ok_or_else(|| {
                        Error::Invariant(format!("projection {:?} is not a shard", y))
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    Ok((bases, table))
}

/// `mu_R(f_1 (x) .. (x) f_k)` on the shards of `p`: factor `j` lives on the
/// restriction of `p` to the `j`-th block of `r`.
pub fn product_over(
    atlas: &Atlas,
    r: &Partition,
    p: &Partition,
    factors: &[Functional],
) -> Result<Functional> {
    if factors.len() != r.num_blocks() {
        return Err(Error::Arity {
            expected: r.num_blocks(),
            got: factors.len(),
        });
    }
    let (bases, table) = projection_table(atlas, r, p)?;
    for (f, b) in factors.iter().zip(&bases) {
        if f.support() != b.partition() {
            return Err(Error::SupportMismatch(
                format!("{:?}", f.support()),
                format!("{:?}", b.partition()),
            ));
        }
    }
    let values = table
        .iter()
        .map(|t| {
            t.iter()
                .zip(factors)
                .fold(Rational::one(), |acc, (i, f)| acc * f.value(*i))
        })
        .collect();
    Functional::new(atlas.basis(p)?, values)
}

/// `mu_P` of simple factors, one per block of `p`.
pub fn product(atlas: &Atlas, p: &Partition, factors: &[Functional]) -> Result<Functional> {
    product_over(atlas, p, p, factors)
}

/// Coordinates of a semisimply differentiable functional in the tensor
/// basis built from the annihilator bases of the blocks.
#[derive(Clone, Debug)]
pub struct Factorization {
    /// annihilator basis of each block, in block order
    pub bases: Vec<Vec<Functional>>,
    /// nonzero coefficients keyed by one basis index per block
    pub coeffs: BTreeMap<Vec<usize>, Rational>,
    /// simple factors with product `f`, when `f` is a pure tensor
    pub factors: Option<Vec<Functional>>,
}

impl Factorization {
    /// Rebuilds the functional as `mu_P` of the expansion.
    pub fn expand(&self, atlas: &Atlas, p: &Partition) -> Result<Functional> {
        let mut total = Functional::zero(atlas.basis(p)?);
        for (idx, c) in &self.coeffs {
            let factors: Vec<Functional> = idx
                .iter()
                .zip(&self.bases)
                .map(|(i, b)| b[*i].clone())
                .collect();
            let term = product(atlas, p, &factors)?;
            total = Functional::new(
                total.basis().clone(),
                total
                    .values()
                    .iter()
                    .zip(term.values())
                    .map(|(a, b)| a + c * b)
                    .collect(),
            )?;
        }
        Ok(total)
    }
}

fn scaled_sum(basis: &[Functional], coeffs: &[Rational]) -> Functional {
    let len = basis[0].values().len();
    let values = (0..len)
        .map(|s| {
            basis
                .iter()
                .zip(coeffs)
                .fold(Rational::zero(), |acc, (b, c)| acc + c * b.value(s))
        })
        .collect();
    Functional::new(basis[0].basis().clone(), values).expect("same basis")
}

/// Inverse of [`product`] on semisimply differentiable functionals.
pub fn factorize(atlas: &Atlas, f: &Functional) -> Result<Factorization> {
    let p = f.support().clone();
    if let Some((a, b)) = semisimplicity_violation(f, &p)? {
        return Err(Error::NotSemisimple(format!(
            "values differ on adjacent shards {} and {}",
            f.basis().get(a).sign_string(),
            f.basis().get(b).sign_string()
        )));
    }
    if let Some(forest) = differentiability_violation(atlas, f)? {
        return Err(Error::NotSemisimplyDifferentiable(format!(
            "derivative along {:?} is not semisimple",
            forest
        )));
    }
    let mut bases = Vec::new();
    let mut free = Vec::new();
    for b in p.blocks() {
        let rel = steinmann_relations_on(atlas, *b)?;
        bases.push(rel.annihilator());
        free.push(rel.free_shards());
    }
    let (_, table) = projection_table(atlas, &p, &p)?;
    let mut g: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (i, t) in table.iter().enumerate() {
        g.insert(t.clone(), f.value(i).clone());
    }
    let mut coeffs = BTreeMap::new();
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    for idx in tuples(&dims) {
        let t: Vec<usize> = idx.iter().zip(&free).map(|(i, fr)| fr[*i]).collect();
        let c = g
            .get(&t)
            .cloned()
            .ok_or_else(|| Error::Invariant(format!("no shard projects onto {:?}", t)))?;
        if !c.is_zero() {
            coeffs.insert(idx, c);
        }
    }
    let mut result = Factorization {
        bases,
        coeffs,
        factors: None,
    };
    if result.expand(atlas, &p)? != *f {
        return Err(Error::Invariant(
            "tensor expansion does not reproduce f".into(),
        ));
    }
    result.factors = rank_one_factors(&result);
    Ok(result)
}

fn tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Splits a rank-one coefficient array into one factor per block.
fn rank_one_factors(fz: &Factorization) -> Option<Vec<Functional>> {
    let (pivot, pc) = fz.coeffs.iter().next()?;
    let k = pivot.len();
    let get = |t: &[usize]| fz.coeffs.get(t).cloned().unwrap_or_else(Rational::zero);
    let replaced = |j: usize, i: usize| {
        let mut t = pivot.clone();
        t[j] = i;
        t
    };
    let dims: Vec<usize> = fz.bases.iter().map(Vec::len).collect();
    let pk = (1..k).fold(Rational::one(), |acc, _| acc * pc);
    for t in tuples(&dims) {
        let lhs = get(&t) * &pk;
        let rhs = (0..k).fold(Rational::one(), |acc, j| acc * get(&replaced(j, t[j])));
        if lhs != rhs {
            return None;
        }
    }
    let factors = (0..k)
        .map(|j| {
            let cs: Vec<Rational> = (0..dims[j])
                .map(|i| {
                    let c = get(&replaced(j, i));
                    if j == 0 {
                        c
                    } else {
                        c / pc
                    }
                })
                .collect();
            scaled_sum(&fz.bases[j], &cs)
        })
        .collect();
    Some(factors)
}

/// Products of block annihilator bases: a basis of the semisimply
/// differentiable functionals over `p`.
pub fn semisimply_differentiable_basis(atlas: &Atlas, p: &Partition) -> Result<Vec<Functional>> {
    let bases: Vec<Vec<Functional>> = p
        .blocks()
        .iter()
        .map(|b| Ok(steinmann_relations_on(atlas, *b)?.annihilator()))
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    tuples(&dims)
        .into_iter()
        .map(|t| {
            let factors: Vec<Functional> =
                t.iter().zip(&bases).map(|(i, b)| b[*i].clone()).collect();
            product(atlas, p, &factors)
        })
        .collect()
}

/// The shard vectors over `p` killed by every semisimply differentiable
/// functional; for the one-block partition this is the Steinmann span.
pub fn stein_subspace(atlas: &Atlas, p: &Partition) -> Result<QuotientSpace> {
    let basis = atlas.basis(p)?;
    let rows: Vec<SparseVector> = semisimply_differentiable_basis(atlas, p)?
        .iter()
        .map(|f| SparseVector::from_dense(f.values()))
        .collect();
    let kernel = RationalMatrix::from_rows(basis.len(), rows).kernel_basis();
    Ok(QuotientSpace::spanned_by(basis, kernel))
}

/// Forest derivative of `f` after checking that `f` is semisimply
/// differentiable; the result is then independent of the layering.
pub fn delayered_derivative(
    atlas: &Atlas,
    forest: &LayeredForest,
    f: &Functional,
) -> Result<Functional> {
    if let Some(v) = differentiability_violation(atlas, f)? {
        return Err(Error::NotSemisimplyDifferentiable(format!("{:?}", v)));
    }
    forest_derivative(atlas, forest, f)
}
