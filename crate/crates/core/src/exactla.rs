//! Exact linear algebra over the rationals.
//!
//! Everything here is exact: ranks use fraction-free elimination over
//! integers with content removal, kernels come from a rational reduced row
//! echelon form, and strict feasibility is an integer-pivoting simplex with
//! Bland's rule.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of a linear form at a point, or a requested sign for a constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn of(x: &Rational) -> Sign {
        if x.is_positive() {
            Sign::Plus
        } else if x.is_negative() {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }
}

/// Sparse vector of rationals indexed by basis position; never stores zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVector {
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    pub fn new() -> SparseVector {
        SparseVector::default()
    }

    pub fn unit(i: usize) -> SparseVector {
        let mut v = SparseVector::new();
        v.set(i, rat(1));
        v
    }

    pub fn from_dense(values: &[Rational]) -> SparseVector {
        let mut v = SparseVector::new();
        for (i, x) in values.iter().enumerate() {
            v.set(i, x.clone());
        }
        v
    }

    pub fn get(&self, i: usize) -> Rational {
        self.entries.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, x: Rational) {
        if x.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    pub fn add_at(&mut self, i: usize, x: &Rational) {
        if x.is_zero() {
            return;
        }
        let cur = self.get(i);
        self.set(i, cur + x);
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, scale: &Rational, other: &SparseVector) {
        if scale.is_zero() {
            return;
        }
        for (i, x) in &other.entries {
            self.add_at(*i, &(scale * x));
        }
    }

    pub fn scaled(&self, scale: &Rational) -> SparseVector {
        let mut out = SparseVector::new();
        out.add_scaled(scale, self);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.iter().next().map(|(i, x)| (*i, x))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn dot_dense(&self, dense: &[Rational]) -> Rational {
        self.iter()
            .fold(Rational::zero(), |acc, (i, x)| acc + x * &dense[i])
    }

    pub fn dot(&self, other: &SparseVector) -> Rational {
        let (small, large) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .iter()
            .filter_map(|(i, x)| large.entries.get(&i).map(|y| x * y))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, x) in self.iter() {
            out[i] = x.clone();
        }
        out
    }
}

impl std::ops::Add<&SparseVector> for &SparseVector {
    type Output = SparseVector;
    fn add(self, rhs: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.add_scaled(&rat(1), rhs);
        out
    }
}

impl std::ops::Sub<&SparseVector> for &SparseVector {
    type Output = SparseVector;
    fn sub(self, rhs: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.add_scaled(&rat(-1), rhs);
        out
    }
}

impl std::ops::Neg for &SparseVector {
    type Output = SparseVector;
    fn neg(self) -> SparseVector {
        self.scaled(&rat(-1))
    }
}

impl fmt::Debug for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(i, x)| (i, x.to_string())))
            .finish()
    }
}

/// Rows of sparse rational vectors over a shared column count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalMatrix {
    ncols: usize,
    rows: Vec<SparseVector>,
}

impl RationalMatrix {
    pub fn new(ncols: usize) -> RationalMatrix {
        RationalMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVector>) -> RationalMatrix {
        for r in &rows {
            assert!(
                r.max_index().is_none_or(|m| m < ncols),
                "row exceeds column count"
            );
        }
        RationalMatrix { ncols, rows }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> RationalMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        RationalMatrix::from_rows(
            ncols,
            rows.iter().map(|r| SparseVector::from_dense(r)).collect(),
        )
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> RationalMatrix {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|x| rat(*x)).collect())
            .collect();
        RationalMatrix::from_dense(&dense)
    }

    pub fn identity(n: usize) -> RationalMatrix {
        RationalMatrix::from_rows(n, (0..n).map(SparseVector::unit).collect())
    }

    pub fn push_row(&mut self, row: SparseVector) {
        assert!(row.max_index().is_none_or(|m| m < self.ncols));
        self.rows.push(row);
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut cols = vec![SparseVector::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row.iter() {
                cols[c].set(r, x.clone());
            }
        }
        RationalMatrix::from_rows(self.rows.len(), cols)
    }

    pub fn mul_dense(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows.iter().map(|r| r.dot_dense(x)).collect()
    }

    /// Exact row rank.
    pub fn rank(&self) -> usize {
        let mut ech = IntegerEchelon::default();
        for r in &self.rows {
            ech.insert(integer_row(r));
        }
        ech.rank()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<SparseVector> {
        let rref = Rref::from_rows(self.ncols, self.rows.iter().cloned());
        rref.kernel_basis()
    }
}

/// Clears denominators and removes content, leaving a primitive integer row.
fn integer_row(r: &SparseVector) -> BTreeMap<usize, BigInt> {
    let lcm = r
        .iter()
        .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let mut out: BTreeMap<usize, BigInt> = r
        .iter()
        .map(|(i, x)| (i, x.numer() * (&lcm / x.denom())))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut BTreeMap<usize, BigInt>) {
    let g = row.values().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.values_mut() {
            *x = &*x / &g;
        }
    }
}

/// Incremental fraction-free row echelon form over the integers.
#[derive(Default)]
struct IntegerEchelon {
    pivots: BTreeMap<usize, BTreeMap<usize, BigInt>>,
}

impl IntegerEchelon {
    fn insert(&mut self, mut row: BTreeMap<usize, BigInt>) -> bool {
        loop {
            let (lead, b) = match row.iter().next() {
                None => return false,
                Some((c, x)) => (*c, x.clone()),
            };
            match self.pivots.get(&lead) {
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(p) => {
                    let a = p[&lead].clone();
                    // row <- a*row - b*p, which cancels the leading entry
                    for x in row.values_mut() {
                        *x *= &a;
                    }
                    for (c, y) in p {
                        let e = row.entry(*c).or_insert_with(BigInt::zero);
                        *e -= &b * y;
                    }
                    row.retain(|_, x| !x.is_zero());
                    make_primitive(&mut row);
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row echelon form over the rationals, built incrementally.
///
/// `reduce` maps a vector to the canonical representative of its coset
/// modulo the row span: the unique vector in the coset that vanishes on
/// every pivot column.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    ncols: usize,
    /// pivot column -> row with a 1 at the pivot and zeros at other pivots
    rows: BTreeMap<usize, SparseVector>,
}

impl Rref {
    pub fn new(ncols: usize) -> Rref {
        Rref {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn from_rows<I: IntoIterator<Item = SparseVector>>(ncols: usize, rows: I) -> Rref {
        let mut r = Rref::new(ncols);
        for row in rows {
            r.insert(row);
        }
        r
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVector> {
        self.rows.values()
    }

    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        let mut out = v.clone();
        for (c, row) in &self.rows {
            let x = out.get(*c);
            if !x.is_zero() {
                out.add_scaled(&-x, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds a row; returns false if it was already in the span.
    pub fn insert(&mut self, v: SparseVector) -> bool {
        let r = self.reduce(&v);
        let (pc, lead) = match r.leading() {
            None => return false,
            Some((c, x)) => (c, x.clone()),
        };
        let r = r.scaled(&lead.recip());
        for row in self.rows.values_mut() {
            let x = row.get(pc);
            if !x.is_zero() {
                row.add_scaled(&-x, &r);
            }
        }
        self.rows.insert(pc, r);
        true
    }

    pub fn kernel_basis(&self) -> Vec<SparseVector> {
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !self.rows.contains_key(c)) {
            let mut v = SparseVector::unit(free);
            for (pc, row) in &self.rows {
                let x = row.get(free);
                if !x.is_zero() {
                    v.set(*pc, -x);
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn rank(m: &RationalMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &RationalMatrix) -> Vec<SparseVector> {
    m.kernel_basis()
}

/// Checks `(A x)_i` against the requested signs exactly.
pub fn satisfies_signs(a: &RationalMatrix, signs: &[Sign], x: &[Rational]) -> bool {
    a.rows.len() == signs.len()
        && a.rows
            .iter()
            .zip(signs)
            .all(|(row, s)| Sign::of(&row.dot_dense(x)) == *s)
}

/// Finds `x` with `(A x)_i` of the requested sign for every row, or `None`.
///
/// Solves `max t` subject to `sign_i * (A x)_i >= t` on strict rows,
/// `(A x)_i = 0` on zero rows, `|x_j| <= 1` and `t <= 1`; the system is
/// strictly feasible iff the optimum is positive. The witness is scaled so
/// its largest absolute entry is 1 and re-checked before being returned.
pub fn strictly_feasible(a: &RationalMatrix, signs: &[Sign]) -> Option<Vec<Rational>> {
    assert_eq!(a.nrows(), signs.len(), "one sign per row");
    let d = a.ncols();
    let int_rows: Vec<Vec<BigInt>> = a
        .rows
        .iter()
        .map(|r| {
            let ir = integer_row(r);
            (0..d)
                .map(|j| ir.get(&j).cloned().unwrap_or_else(BigInt::zero))
                .collect()
        })
        .collect();

    // columns: u_0..u_{d-1}, v_0..v_{d-1}, t ; x = u - v
    let nv = 2 * d + 1;
    let t_col = 2 * d;
    let mut cons: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    for (row, s) in int_rows.iter().zip(signs) {
        match s {
            Sign::Zero => {
                for sgn in [1i64, -1] {
                    let mut c = vec![BigInt::zero(); nv];
                    for j in 0..d {
                        c[j] = &row[j] * sgn;
                        c[d + j] = -&row[j] * sgn;
                    }
                    cons.push((c, BigInt::zero()));
                }
            }
            Sign::Plus | Sign::Minus => {
                let sgn = if *s == Sign::Plus { 1i64 } else { -1 };
                let mut c = vec![BigInt::zero(); nv];
                for j in 0..d {
                    c[j] = -&row[j] * sgn;
                    c[d + j] = &row[j] * sgn;
                }
                c[t_col] = BigInt::one();
                cons.push((c, BigInt::zero()));
            }
        }
    }
    for j in 0..nv {
        let mut c = vec![BigInt::zero(); nv];
        c[j] = BigInt::one();
        cons.push((c, BigInt::one()));
    }
    let mut objective = vec![BigInt::zero(); nv];
    objective[t_col] = BigInt::one();

    let small: Option<Vec<(Vec<i128>, i128)>> = cons
        .iter()
        .map(|(row, b)| {
            let row: Option<Vec<i128>> = row.iter().map(|v| v.to_i128()).collect();
            Some((row?, b.to_i128()?))
        })
        .collect();
    let small_obj: Vec<i128> = objective.iter().map(|v| v.to_i128().unwrap_or(0)).collect();
    let sol = small
        .and_then(|c| maximize(&c, &small_obj))
        .or_else(|| maximize(&cons, &objective))
        .expect("big integer pivoting cannot overflow");
    if !sol[t_col].is_positive() {
        return None;
    }
    let mut x: Vec<Rational> = (0..d).map(|j| &sol[j] - &sol[d + j]).collect();
    let scale = x
        .iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    if !scale.is_zero() {
        for v in x.iter_mut() {
            *v = &*v / &scale;
        }
    }
    debug_assert!(satisfies_signs(a, signs, &x));
    if !satisfies_signs(a, signs, &x) {
        return None;
    }
    Some(x)
}

/// Tableau entries: `None` from an operation means overflow.
trait TableauInt: Clone + Ord + Sized {
    fn tzero() -> Self;
    fn tone() -> Self;
    fn below(&self) -> bool;
    fn above(&self) -> bool;
    fn tneg(&self) -> Option<Self>;
    fn tmul(&self, other: &Self) -> Option<Self>;
    /// `(a * p - f * b) / den`, exact.
    fn pivot(a: &Self, p: &Self, f: &Self, b: &Self, den: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl TableauInt for i128 {
    fn tzero() -> Self {
        0
    }
    fn tone() -> Self {
        1
    }
    fn below(&self) -> bool {
        *self < 0
    }
    fn above(&self) -> bool {
        *self > 0
    }
    fn tneg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn tmul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn pivot(a: &Self, p: &Self, f: &Self, b: &Self, den: &Self) -> Option<Self> {
        let v = a.checked_mul(*p)?.checked_sub(f.checked_mul(*b)?)?;
        Some(v / den)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl TableauInt for BigInt {
    fn tzero() -> Self {
        Zero::zero()
    }
    fn tone() -> Self {
        One::one()
    }
    fn below(&self) -> bool {
        Signed::is_negative(self)
    }
    fn above(&self) -> bool {
        Signed::is_positive(self)
    }
    fn tneg(&self) -> Option<Self> {
        Some(-self)
    }
    fn tmul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn pivot(a: &Self, p: &Self, f: &Self, b: &Self, den: &Self) -> Option<Self> {
        Some((a * p - f * b) / den)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// `max c.x` subject to `A x <= b`, `x >= 0`, with `b >= 0` so the slack
/// basis is feasible. Integer (Edmonds) pivoting with Bland's rule; the
/// feasible region here is bounded, so the problem always has an optimum.
/// Returns `None` only if the integer type overflows.
fn maximize<T: TableauInt>(cons: &[(Vec<T>, T)], c: &[T]) -> Option<Vec<Rational>> {
    let m = cons.len();
    let nv = c.len();
    let width = nv + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    for (i, (row, b)) in cons.iter().enumerate() {
        debug_assert!(!b.below());
        let mut r = vec![T::tzero(); width];
        r[..nv].clone_from_slice(row);
        r[nv + i] = T::tone();
        r[rhs] = b.clone();
        t.push(r);
    }
    let mut obj = vec![T::tzero(); width];
    for j in 0..nv {
        obj[j] = c[j].tneg()?;
    }
    t.push(obj);
    let mut basis: Vec<usize> = (nv..nv + m).collect();
    let mut den = T::tone();

    loop {
        // Bland: lowest-index column with negative reduced cost
        let enter = match (0..width - 1).find(|&j| t[m][j].below()) {
            None => break,
            Some(j) => j,
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].above() {
                continue;
            }
            leave = Some(match leave {
                None => i,
                Some(k) => {
                    // compare t[i][rhs]/t[i][enter] with t[k][rhs]/t[k][enter]
                    let lhs = t[i][rhs].tmul(&t[k][enter])?;
                    let rhs_ = t[k][rhs].tmul(&t[i][enter])?;
                    if lhs < rhs_ || (lhs == rhs_ && basis[i] < basis[k]) {
                        i
                    } else {
                        k
                    }
                }
            });
        }
        let r = leave.expect("bounded feasible region");
        let p = t[r][enter].clone();
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[enter].clone();
            for j in 0..width {
                row[j] = T::pivot(&row[j], &p, &f, &pivot_row[j], &den)?;
            }
        }
        den = p;
        basis[r] = enter;
    }

    let mut sol = vec![Rational::zero(); nv];
    for (i, b) in basis.iter().enumerate() {
        if *b < nv {
            sol[*b] = Rational::new(t[i][rhs].to_big(), den.to_big());
        }
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(
            RationalMatrix::from_integers(&[vec![0, 0], vec![0, 0]]).rank(),
            0
        );
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
        assert_eq!(
            RationalMatrix::from_integers(&[vec![1, 1], vec![2, 2]]).rank(),
            1
        );
        let m = RationalMatrix::from_dense(&[
            vec![ratio(1, 2), ratio(1, 3), rat(0)],
            vec![rat(3), rat(2), rat(0)],
            vec![rat(0), rat(0), ratio(-7, 5)],
        ]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(RationalMatrix::identity(3).kernel_basis().is_empty());
        let k = RationalMatrix::from_integers(&[vec![1, -1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].to_dense(2), vec![rat(1), rat(1)]);
    }

    #[test]
    fn rref_reduce_is_canonical() {
        let rows = vec![
            SparseVector::from_dense(&[rat(1), rat(-1), rat(0)]),
            SparseVector::from_dense(&[rat(0), rat(1), rat(-1)]),
        ];
        let r = Rref::from_rows(3, rows);
        let a = SparseVector::unit(0);
        let b = SparseVector::unit(2);
        assert_eq!(r.reduce(&a), r.reduce(&b));
        assert!(r.contains(&(&a - &b)));
        assert!(!r.contains(&a));
    }

    #[test]
    fn feasibility_examples() {
        let a = RationalMatrix::from_integers(&[vec![1]]);
        assert_eq!(strictly_feasible(&a, &[Sign::Plus]), Some(vec![rat(1)]));
        let a = RationalMatrix::from_integers(&[vec![1], vec![-1]]);
        assert_eq!(strictly_feasible(&a, &[Sign::Plus, Sign::Plus]), None);
        // x + y > 0, x - y = 0, x < 1 ... here: y > 0
        let a = RationalMatrix::from_integers(&[vec![1, 1], vec![1, -1], vec![0, 1]]);
        let w = strictly_feasible(&a, &[Sign::Plus, Sign::Zero, Sign::Plus]).unwrap();
        assert!(satisfies_signs(
            &a,
            &[Sign::Plus, Sign::Zero, Sign::Plus],
            &w
        ));
        assert_eq!(w.iter().map(|x| x.abs()).max().unwrap(), rat(1));
        assert_eq!(
            strictly_feasible(&a, &[Sign::Plus, Sign::Zero, Sign::Minus]),
            None
        );
    }

    #[test]
    fn feasibility_with_no_rows() {
        let a = RationalMatrix::new(2);
        assert_eq!(strictly_feasible(&a, &[]), Some(vec![rat(0), rat(0)]));
    }

    fn small_matrix() -> impl proptest::strategy::Strategy<Value = Vec<Vec<i64>>> {
        use proptest::prelude::*;
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
        })
    }

    proptest::proptest! {
        #[test]
        fn rank_equals_transpose_rank(rows in small_matrix()) {
            let m = RationalMatrix::from_integers(&rows);
            proptest::prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(rows in small_matrix()) {
            let m = RationalMatrix::from_integers(&rows);
            let k = m.kernel_basis();
            proptest::prop_assert_eq!(m.rank() + k.len(), m.ncols());
            for v in &k {
                let dense = v.to_dense(m.ncols());
                proptest::prop_assert!(m.mul_dense(&dense).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn witnesses_verify(rows in small_matrix(), pick in proptest::collection::vec(0u8..3, 5)) {
            let m = RationalMatrix::from_integers(&rows);
            let signs: Vec<Sign> = (0..m.nrows())
                .map(|i| [Sign::Plus, Sign::Minus, Sign::Zero][pick[i % pick.len()] as usize])
                .collect();
            if let Some(w) = strictly_feasible(&m, &signs) {
                proptest::prop_assert!(satisfies_signs(&m, &signs, &w));
            }
        }

        #[test]
        fn feasible_when_realized(rows in small_matrix(), pt in proptest::collection::vec(-4i64..=4, 6)) {
            // the sign pattern of an actual point must be found feasible
            let m = RationalMatrix::from_integers(&rows);
            let x: Vec<Rational> = (0..m.ncols()).map(|j| rat(pt[j])).collect();
            let signs: Vec<Sign> = m.mul_dense(&x).iter().map(Sign::of).collect();
            proptest::prop_assert!(strictly_feasible(&m, &signs).is_some());
        }
    }
}
