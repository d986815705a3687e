//! Steinmann arrows, dual forest derivatives on shard vectors, and forest
//! derivatives on functionals.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::arrangement::{Atlas, Shard, ShardBasis};
use crate::error::{Error, Result};
use crate::exactla::{rat, Rational, Sign, SparseVector};
use crate::forests::{antisymmetrize, Cut, LayeredForest};
use crate::ground::Partition;

/// A rational combination of shards sharing one support.
#[derive(Clone)]
pub struct ShardVector {
    basis: Arc<ShardBasis>,
    coeffs: SparseVector,
}

impl ShardVector {
    pub fn zero(basis: Arc<ShardBasis>) -> ShardVector {
        ShardVector {
            basis,
            coeffs: SparseVector::new(),
        }
    }

    pub fn from_coeffs(basis: Arc<ShardBasis>, coeffs: SparseVector) -> Result<ShardVector> {
        if coeffs.max_index().is_some_and(|i| i >= basis.len()) {
            return Err(Error::Format(
                "coefficient index outside the shard basis".into(),
            ));
        }
        Ok(ShardVector { basis, coeffs })
    }

    pub fn from_shard(atlas: &Atlas, x: &Shard) -> Result<ShardVector> {
        let (basis, i) = atlas.locate(x)?;
        Ok(ShardVector {
            basis,
            coeffs: SparseVector::unit(i),
        })
    }

    pub fn basis(&self) -> &Arc<ShardBasis> {
        &self.basis
    }

    pub fn support(&self) -> &Partition {
        self.basis.partition()
    }

    pub fn coeffs(&self) -> &SparseVector {
        &self.coeffs
    }

    pub fn get(&self, x: &Shard) -> Rational {
        self.basis
            .index_of(x)
            .map(|i| self.coeffs.get(i))
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&Shard, &Rational)> {
        self.coeffs.iter().map(move |(i, c)| (self.basis.get(i), c))
    }

    fn check_same(&self, other: &ShardVector) -> Result<()> {
        if self.support() != other.support() {
            return Err(Error::SupportMismatch(
                format!("{:?}", self.support()),
                format!("{:?}", other.support()),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &ShardVector) -> Result<ShardVector> {
        self.check_same(other)?;
        Ok(ShardVector {
            basis: self.basis.clone(),
            coeffs: &self.coeffs + &other.coeffs,
        })
    }

    pub fn sub(&self, other: &ShardVector) -> Result<ShardVector> {
        self.check_same(other)?;
        Ok(ShardVector {
            basis: self.basis.clone(),
            coeffs: &self.coeffs - &other.coeffs,
        })
    }

    pub fn scaled(&self, c: &Rational) -> ShardVector {
        ShardVector {
            basis: self.basis.clone(),
            coeffs: self.coeffs.scaled(c),
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &ShardVector) -> Result<()> {
        self.check_same(other)?;
        self.coeffs.add_scaled(c, &other.coeffs);
        Ok(())
    }
}

impl PartialEq for ShardVector {
    fn eq(&self, other: &ShardVector) -> bool {
        self.support() == other.support() && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for ShardVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{{", self.support())?;
        for (k, (x, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} {}", c, x.sign_string())?;
        }
        write!(f, "}}")
    }
}

/// A rational function on all shards of one support.
#[derive(Clone)]
pub struct Functional {
    basis: Arc<ShardBasis>,
    values: Vec<Rational>,
}

impl Functional {
    pub fn new(basis: Arc<ShardBasis>, values: Vec<Rational>) -> Result<Functional> {
        if values.len() != basis.len() {
            return Err(Error::Arity {
                expected: basis.len(),
                got: values.len(),
            });
        }
        Ok(Functional { basis, values })
    }

    pub fn from_fn<F: FnMut(&Shard) -> Rational>(basis: Arc<ShardBasis>, f: F) -> Functional {
        let values = basis.shards().iter().map(f).collect();
        Functional { basis, values }
    }

    pub fn zero(basis: Arc<ShardBasis>) -> Functional {
        let values = vec![Rational::zero(); basis.len()];
        Functional { basis, values }
    }

    pub fn constant(basis: Arc<ShardBasis>, c: Rational) -> Functional {
        let values = vec![c; basis.len()];
        Functional { basis, values }
    }

    pub fn indicator(basis: Arc<ShardBasis>, i: usize) -> Functional {
        let mut f = Functional::zero(basis);
        f.values[i] = rat(1);
        f
    }

    /// Integer values drawn uniformly from `-bound..=bound`.
    pub fn random<R: Rng>(basis: Arc<ShardBasis>, rng: &mut R, bound: i64) -> Functional {
        let values = (0..basis.len())
            .map(|_| rat(rng.gen_range(-bound..=bound)))
            .collect();
        Functional { basis, values }
    }

    pub fn basis(&self) -> &Arc<ShardBasis> {
        &self.basis
    }

    pub fn support(&self) -> &Partition {
        self.basis.partition()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn eval(&self, x: &Shard) -> Result<Rational> {
        let i = self.basis.index_of(x).ok_or_else(|| {
            Error::SupportMismatch(format!("{:?}", x), format!("{:?}", self.support()))
        })?;
        Ok(self.values[i].clone())
    }

    pub fn eval_vector(&self, v: &ShardVector) -> Result<Rational> {
        if v.support() != self.support() {
            return Err(Error::SupportMismatch(
                format!("{:?}", v.support()),
                format!("{:?}", self.support()),
            ));
        }
        Ok(v.coeffs.dot_dense(&self.values))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

impl PartialEq for Functional {
    fn eq(&self, other: &Functional) -> bool {
        self.support() == other.support() && self.values == other.values
    }
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[", self.support())?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "]")
    }
}

/// Source partition `P` of a cut whose target is `q`.
fn cut_source(q: &Partition, v: &Cut) -> Result<Partition> {
    if !q.contains_block(v.left) || !q.contains_block(v.right()) {
        return Err(Error::Boundary(format!(
            "{:?} and {:?} are not both blocks of {:?}",
            v.left,
            v.right(),
            q
        )));
    }
    q.merge(v.left, v.right())
}

/// `X^V`: the chamber-side shard over the merged support, pushed to the
/// side of `V`'s left block. Fails with `Invariant` if the result is not a
/// shard, which would be an implementation bug.
pub fn arrow(atlas: &Atlas, x: &Shard, v: &Cut) -> Result<Shard> {
    let q = x.support();
    let p = cut_source(q, v)?;
    let c = v.left;
    let d = v.right();
    let y = atlas.shard_with_signs(&p, |k| {
        if k == c {
            Sign::Plus
        } else if k == d {
            Sign::Minus
        } else {
            x.sign(k)
        }
    })?;
    atlas.locate(&y)?;
    Ok(y)
}

/// Basis-index table of `X -> X^V` for every shard `X` over `q`.
pub fn arrow_table(atlas: &Atlas, q: &Partition, v: &Cut) -> Result<Arc<Vec<usize>>> {
    let key = (q.clone(), v.parent, v.left);
    if let Some(t) = atlas.cached_arrow(&key) {
        return Ok(t);
    }
    let p = cut_source(q, v)?;
    let target = atlas.basis(&p)?;
    let table = atlas
        .basis(q)?
        .shards()
        .iter()
        .map(|x| {
            let y = arrow(atlas, x, v)?;
            Ok(target.index_of(&y).expect("located by arrow"))
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(atlas.store_arrow(key, table))
}

/// `X^F` for a forest: arrows applied from the innermost cut outwards.
pub fn arrow_forest(atlas: &Atlas, x: &Shard, f: &LayeredForest) -> Result<Shard> {
    if x.support() != f.target() {
        return Err(boundary(f.target(), x.support()));
    }
    let mut y = x.clone();
    for v in f.cuts().iter().rev() {
        y = arrow(atlas, &y, v)?;
    }
    Ok(y)
}

fn boundary(expected: &Partition, got: &Partition) -> Error {
    Error::Boundary(format!("expected support {:?}, got {:?}", expected, got))
}

/// `d*_V v = v^V - v^Vbar`, extended linearly.
pub fn dual_cut_derivative(atlas: &Atlas, v: &Cut, x: &ShardVector) -> Result<ShardVector> {
    let q = x.support();
    let p = cut_source(q, v)?;
    let plus = arrow_table(atlas, q, v)?;
    let minus = arrow_table(atlas, q, &v.reversed())?;
    let mut out = SparseVector::new();
    for (i, c) in x.coeffs.iter() {
        out.add_at(plus[i], c);
        out.add_at(minus[i], &-c);
    }
    ShardVector::from_coeffs(atlas.basis(&p)?, out)
}

/// `d*_F v`, evaluated cut by cut from the innermost cut outwards.
pub fn dual_forest_derivative(
    atlas: &Atlas,
    f: &LayeredForest,
    x: &ShardVector,
) -> Result<ShardVector> {
    if x.support() != f.target() {
        return Err(boundary(f.target(), x.support()));
    }
    let mut v = x.clone();
    for cut in f.cuts().iter().rev() {
        v = dual_cut_derivative(atlas, cut, &v)?;
    }
    Ok(v)
}

/// `d*_F v` as the signed sum of `X^G` over the antisymmetrization of `F`.
pub fn dual_forest_derivative_antisymmetrized(
    atlas: &Atlas,
    f: &LayeredForest,
    x: &ShardVector,
) -> Result<ShardVector> {
    if x.support() != f.target() {
        return Err(boundary(f.target(), x.support()));
    }
    let basis = atlas.basis(f.source())?;
    let mut out = SparseVector::new();
    for (sign, g) in antisymmetrize(f).terms {
        for (y, c) in x.terms() {
            let z = arrow_forest(atlas, y, &g)?;
            let i = basis.index_of(&z).expect("arrow results are located");
            out.add_at(i, &(c * rat(sign as i64)));
        }
    }
    ShardVector::from_coeffs(basis, out)
}

/// `d_V f(X) = f(X^V) - f(X^Vbar)` for `X` over the target of `V`.
pub fn cut_derivative(atlas: &Atlas, v: &Cut, f: &Functional, q: &Partition) -> Result<Functional> {
    let p = cut_source(q, v)?;
    if &p != f.support() {
        return Err(boundary(&p, f.support()));
    }
    let plus = arrow_table(atlas, q, v)?;
    let minus = arrow_table(atlas, q, &v.reversed())?;
    let basis = atlas.basis(q)?;
    let values = (0..basis.len())
        .map(|i| &f.values[plus[i]] - &f.values[minus[i]])
        .collect();
    Functional::new(basis, values)
}

/// `d_F f` as successive finite differences, outermost cut first.
pub fn forest_derivative(atlas: &Atlas, f: &LayeredForest, g: &Functional) -> Result<Functional> {
    if f.source() != g.support() {
        return Err(boundary(f.source(), g.support()));
    }
    let mut current = g.clone();
    let mut support = f.source().clone();
    for v in f.cuts() {
        support = support.split(v.parent, v.left)?;
        current = cut_derivative(atlas, v, &current, &support)?;
    }
    Ok(current)
}

/// `d_F f(X) = f(d*_F X)` evaluated shard by shard.
pub fn forest_derivative_by_duality(
    atlas: &Atlas,
    f: &LayeredForest,
    g: &Functional,
) -> Result<Functional> {
    if f.source() != g.support() {
        return Err(boundary(f.source(), g.support()));
    }
    let basis = atlas.basis(f.target())?;
    let values = (0..basis.len())
        .map(|i| {
            let x = ShardVector::from_coeffs(basis.clone(), SparseVector::unit(i))?;
            g.eval_vector(&dual_forest_derivative(atlas, f, &x)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Functional::new(basis, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forests::{all_forests, compose, parse_forest};
    use crate::ground::{all_partitions, GroundSet, Subset};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zero_dim(atlas: &Atlas) -> ShardVector {
        let b = atlas.basis(&Partition::singletons(atlas.n())).unwrap();
        ShardVector::from_coeffs(b, SparseVector::unit(0)).unwrap()
    }

    #[test]
    fn arrow_n2() {
        let atlas = Atlas::new(2).unwrap();
        let z = zero_dim(&atlas);
        let x = z.basis().get(0).clone();
        let v = Cut::new(Subset(3), Subset(1)).unwrap();
        let a = arrow(&atlas, &x, &v).unwrap();
        let b = arrow(&atlas, &x, &v.reversed()).unwrap();
        assert_eq!(a.sign(Subset(1)), Sign::Plus);
        assert_eq!(b.sign(Subset(1)), Sign::Minus);
        assert_ne!(a, b);
    }

    #[test]
    fn arrow_rejects_bad_cut() {
        let atlas = Atlas::new(3).unwrap();
        let x = zero_dim(&atlas).basis().get(0).clone();
        let v = Cut::new(Subset(7), Subset(1)).unwrap();
        assert!(matches!(arrow(&atlas, &x, &v), Err(Error::Boundary(_))));
    }

    #[test]
    fn example_sums_vanish() {
        let atlas = Atlas::new(2).unwrap();
        let gr = GroundSet::numeric(2).unwrap();
        let z = zero_dim(&atlas);
        let a = dual_forest_derivative(&atlas, &parse_forest(&gr, "[1,2]").unwrap(), &z).unwrap();
        let b = dual_forest_derivative(&atlas, &parse_forest(&gr, "[2,1]").unwrap(), &z).unwrap();
        assert!(a.add(&b).unwrap().is_zero());
        assert!(!a.is_zero());

        let atlas = Atlas::new(3).unwrap();
        let gr = GroundSet::numeric(3).unwrap();
        let z = zero_dim(&atlas);
        let mut sum = ShardVector::zero(atlas.basis(&Partition::one_block(3)).unwrap());
        for t in ["[[1,2],3]", "[[3,1],2]", "[[2,3],1]"] {
            let d = dual_forest_derivative(&atlas, &parse_forest(&gr, t).unwrap(), &z).unwrap();
            assert_eq!(d.coeffs().nnz(), 4);
            sum = sum.add(&d).unwrap();
        }
        assert!(sum.is_zero());
    }

    #[test]
    fn identity_forest_is_identity() {
        let atlas = Atlas::new(3).unwrap();
        let p = Partition::one_block(3);
        let b = atlas.basis(&p).unwrap();
        let id = LayeredForest::identity(&p);
        let v = ShardVector::from_coeffs(b.clone(), SparseVector::unit(2)).unwrap();
        assert_eq!(dual_forest_derivative(&atlas, &id, &v).unwrap(), v);
        let f = Functional::indicator(b, 1);
        assert_eq!(forest_derivative(&atlas, &id, &f).unwrap(), f);
    }

    #[test]
    fn indicator_derivative_n2() {
        let atlas = Atlas::new(2).unwrap();
        let b = atlas.basis(&Partition::one_block(2)).unwrap();
        let plus = b
            .shards()
            .iter()
            .position(|x| x.sign(Subset(1)) == Sign::Plus)
            .unwrap();
        let f = Functional::indicator(b, plus);
        let gr = GroundSet::numeric(2).unwrap();
        let d = forest_derivative(&atlas, &parse_forest(&gr, "[1,2]").unwrap(), &f).unwrap();
        assert_eq!(d.values(), &[rat(1)]);
    }

    #[test]
    fn two_paths_and_duality_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            let atlas = Atlas::new(n).unwrap();
            for p in all_partitions(n) {
                for f in all_forests(&p, 3) {
                    let tb = atlas.basis(f.target()).unwrap();
                    for i in 0..tb.len() {
                        let x =
                            ShardVector::from_coeffs(tb.clone(), SparseVector::unit(i)).unwrap();
                        assert_eq!(
                            dual_forest_derivative(&atlas, &f, &x).unwrap(),
                            dual_forest_derivative_antisymmetrized(&atlas, &f, &x).unwrap()
                        );
                    }
                    let g = Functional::random(atlas.basis(&p).unwrap(), &mut rng, 5);
                    assert_eq!(
                        forest_derivative(&atlas, &f, &g).unwrap(),
                        forest_derivative_by_duality(&atlas, &f, &g).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn functoriality_n4() {
        let atlas = Atlas::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = Partition::one_block(4);
        let g = Functional::random(atlas.basis(&p).unwrap(), &mut rng, 5);
        for f1 in all_forests(&p, 2) {
            for f2 in all_forests(f1.target(), 3 - f1.num_cuts()) {
                let f12 = compose(&f1, &f2).unwrap();
                let lhs = forest_derivative(&atlas, &f12, &g).unwrap();
                let mid = forest_derivative(&atlas, &f1, &g).unwrap();
                assert_eq!(lhs, forest_derivative(&atlas, &f2, &mid).unwrap());
                let tb = atlas.basis(f12.target()).unwrap();
                let x = ShardVector::from_coeffs(tb, SparseVector::unit(0)).unwrap();
                let inner = dual_forest_derivative(&atlas, &f2, &x).unwrap();
                assert_eq!(
                    dual_forest_derivative(&atlas, &f12, &x).unwrap(),
                    dual_forest_derivative(&atlas, &f1, &inner).unwrap()
                );
            }
        }
    }

    #[test]
    fn layerings_differ_n4() {
        let atlas = Atlas::new(4).unwrap();
        let gr = GroundSet::numeric(4).unwrap();
        let a = parse_forest(&gr, "[[1,2],[3,4]]@0,1,2").unwrap();
        let b = parse_forest(&gr, "[[1,2],[3,4]]@0,2,1").unwrap();
        let z = zero_dim(&atlas);
        assert_ne!(
            dual_forest_derivative(&atlas, &a, &z).unwrap(),
            dual_forest_derivative(&atlas, &b, &z).unwrap()
        );
        let mut rng = ChaCha8Rng::seed_from_u64(0x6a7e);
        let g = Functional::random(atlas.basis(&Partition::one_block(4)).unwrap(), &mut rng, 9);
        assert_ne!(
            forest_derivative(&atlas, &a, &g).unwrap(),
            forest_derivative(&atlas, &b, &g).unwrap()
        );
    }

    #[test]
    fn pre_lie_geometry_n4() {
        // X^[[A,B],C] = X^[[A,C],B] and X^[A,[B,C]] = X^[B,[A,C]]
        let atlas = Atlas::new(4).unwrap();
        for p in all_partitions(4) {
            if p.num_blocks() < 3 {
                continue;
            }
            let bl = p.blocks();
            for x in atlas.basis(&p).unwrap().shards() {
                for (a, b, c) in triples(bl.len()) {
                    let (a, b, c) = (bl[a], bl[b], bl[c]);
                    let tree = |outer_left: Subset, inner_parent: Subset, inner_left: Subset| {
                        let all = a.union(b).union(c);
                        let top = p.merge(a, b).unwrap().merge(a.union(b), c).unwrap();
                        let f = LayeredForest::new(
                            top,
                            vec![
                                Cut::new(all, outer_left).unwrap(),
                                Cut::new(inner_parent, inner_left).unwrap(),
                            ],
                        )
                        .unwrap();
                        arrow_forest(&atlas, x, &f).unwrap()
                    };
                    let left_nested = |a: Subset, b: Subset| tree(a.union(b), a.union(b), a);
                    let right_nested = |a: Subset, b: Subset, c: Subset| tree(a, b.union(c), b);
                    assert_eq!(left_nested(a, b), left_nested(a, c));
                    assert_eq!(right_nested(a, b, c), right_nested(b, a, c));
                }
            }
        }
    }

    fn triples(k: usize) -> Vec<(usize, usize, usize)> {
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
}
