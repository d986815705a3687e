//! Ground sets, bitmask subsets and set partitions.
//!
//! All arithmetic runs on element indices `0..n`; labels only matter for
//! parsing and printing. Partitions keep their blocks sorted by smallest
//! element so that equal partitions compare and hash equal.

use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set a [`Subset`] can address.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of `{0, .., n-1}` stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Subset {
        Subset(it.into_iter().fold(0u64, |m, i| m | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    /// All nonempty proper subsets of `self`, in increasing bitmask order.
    pub fn proper_nonempty_subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        // standard submask walk, collected so the order is ascending
        let mut subs = Vec::new();
        let mut s = full;
        while s != 0 {
            s = (s - 1) & full;
            if s != 0 {
                subs.push(Subset(s));
            }
        }
        subs.reverse();
        subs.into_iter()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i)?;
        }
        write!(f, "}}")
    }
}

/// A finite labeled set. Index order is the label order given at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(labels: I) -> Result<GroundSet> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidGround("no labels".into()));
        }
        if labels.len() > MAX_ELEMENTS {
            return Err(Error::UnsupportedSize(labels.len(), "at most 64"));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(|c| "[](){}|,@ \t\n".contains(c)) {
                return Err(Error::InvalidGround(format!("bad label {:?}", l)));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidGround(format!("duplicate label {:?}", l)));
            }
        }
        Ok(GroundSet { labels })
    }

    /// The ground set `{1, .., n}`.
    pub fn numeric(n: usize) -> Result<GroundSet> {
        GroundSet::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    /// Single-character labels print without separators: `{1,3}` is `13`.
    pub fn compact(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }

    pub fn format_subset(&self, s: Subset) -> String {
        let parts: Vec<&str> = s.iter().map(|i| self.label(i)).collect();
        if self.compact() {
            parts.concat()
        } else {
            parts.join(",")
        }
    }

    /// Parses a block of labels: `134` for compact ground sets, `a,b` otherwise.
    pub fn parse_subset(&self, text: &str) -> Result<Subset> {
        let text = text.trim();
        let tokens: Vec<String> = if text.contains(',') || !self.compact() {
            text.split(',').map(|t| t.trim().to_string()).collect()
        } else {
            text.chars().map(|c| c.to_string()).collect()
        };
        let mut s = Subset::EMPTY;
        for t in tokens {
            let i = self
                .index_of(&t)
                .ok_or_else(|| Error::Format(format!("unknown label {:?}", t)))?;
            if s.contains(i) {
                return Err(Error::Format(format!("repeated label {:?}", t)));
            }
            s = s.union(Subset::singleton(i));
        }
        Ok(s)
    }

    pub fn format_partition(&self, p: &Partition) -> String {
        let blocks: Vec<String> = p.blocks().iter().map(|b| self.format_subset(*b)).collect();
        format!("({})", blocks.join("|"))
    }

    pub fn parse_partition(&self, text: &str) -> Result<Partition> {
        let inner = strip_parens(text)?;
        let blocks = inner
            .split('|')
            .map(|b| self.parse_subset(b))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(self.len(), blocks)
    }
}

fn strip_parens(text: &str) -> Result<&str> {
    let t = text.trim();
    t.strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Format(format!("partition must be parenthesized: {:?}", text)))
}

/// Builds a ground set from the labels appearing in a partition string and
/// parses it. Labels are sorted numerically when all are integers.
pub fn parse_partition_inferring_ground(text: &str) -> Result<(GroundSet, Partition)> {
    let inner = strip_parens(text)?;
    let multi = inner.contains(',');
    let mut labels: Vec<String> = Vec::new();
    for block in inner.split('|') {
        if multi {
            labels.extend(block.split(',').map(|t| t.trim().to_string()));
        } else {
            labels.extend(block.trim().chars().map(|c| c.to_string()));
        }
    }
    if labels.iter().all(|l| l.parse::<u64>().is_ok()) {
        labels.sort_by_key(|l| l.parse::<u64>().unwrap());
    } else {
        labels.sort();
    }
    let ground = GroundSet::new(labels)?;
    let p = ground.parse_partition(text)?;
    Ok((ground, p))
}

/// A set partition of `{0, .., n-1}`, blocks sorted by smallest element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Subset>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Subset>) -> Result<Partition> {
        if n == 0 || n > MAX_ELEMENTS {
            return Err(Error::UnsupportedSize(n, "1..=64"));
        }
        let mut seen = Subset::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if b.meets(seen) {
                return Err(Error::InvalidPartition(format!(
                    "overlapping block {:?}",
                    b
                )));
            }
            seen = seen.union(*b);
        }
        if seen != Subset::full(n) {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {:?}, expected all of 0..{}",
                seen, n
            )));
        }
        blocks.sort_by_key(|b| b.min_element());
        Ok(Partition { n, blocks })
    }

    pub fn one_block(n: usize) -> Partition {
        Partition::new(n, vec![Subset::full(n)]).expect("valid size")
    }

    pub fn singletons(n: usize) -> Partition {
        Partition::new(n, (0..n).map(Subset::singleton).collect()).expect("valid size")
    }

    /// `block` together with singletons for every element outside it.
    pub fn completed_with_singletons(n: usize, blocks: &[Subset]) -> Result<Partition> {
        let covered = blocks.iter().fold(Subset::EMPTY, |a, b| a.union(*b));
        let mut all = blocks.to_vec();
        all.extend(
            Subset::full(n)
                .difference(covered)
                .iter()
                .map(Subset::singleton),
        );
        Partition::new(n, all)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn contains_block(&self, b: Subset) -> bool {
        self.blocks.contains(&b)
    }

    pub fn block_of(&self, i: usize) -> Subset {
        *self
            .blocks
            .iter()
            .find(|b| b.contains(i))
            .expect("element in range")
    }

    /// Dimension of the flat of `P`: `n - #blocks`.
    pub fn flat_dimension(&self) -> usize {
        self.n - self.blocks.len()
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn is_finer(&self, coarser: &Partition) -> Result<bool> {
        self.check_same_ground(coarser)?;
        Ok(self
            .blocks
            .iter()
            .all(|b| coarser.blocks.iter().any(|c| b.is_subset_of(*c))))
    }

    pub fn check_same_ground(&self, other: &Partition) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GroundMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// `E` minus every block of `self` that `E` contains.
    pub fn reduction(&self, e: Subset) -> Subset {
        self.blocks
            .iter()
            .filter(|b| b.is_subset_of(e))
            .fold(e, |acc, b| acc.difference(*b))
    }

    /// Union of the blocks meeting `e`.
    pub fn closure(&self, e: Subset) -> Subset {
        self.blocks
            .iter()
            .filter(|b| b.meets(e))
            .fold(Subset::EMPTY, |acc, b| acc.union(*b))
    }

    /// Restriction to the blocks inside `t`, completed with singletons.
    pub fn restrict_complete(&self, t: Subset) -> Partition {
        let inside: Vec<Subset> = self
            .blocks
            .iter()
            .copied()
            .filter(|b| b.is_subset_of(t))
            .collect();
        Partition::completed_with_singletons(self.n, &inside).expect("disjoint blocks")
    }

    /// Replaces block `parent` with `left` and `parent - left`.
    pub fn split(&self, parent: Subset, left: Subset) -> Result<Partition> {
        if !self.contains_block(parent) {
            return Err(Error::Boundary(format!("{:?} is not a block", parent)));
        }
        if left.is_empty() || left == parent || !left.is_subset_of(parent) {
            return Err(Error::Boundary(format!(
                "{:?} is not a proper nonempty part of {:?}",
                left, parent
            )));
        }
        let mut blocks: Vec<Subset> = self
            .blocks
            .iter()
            .copied()
            .filter(|b| *b != parent)
            .collect();
        blocks.push(left);
        blocks.push(parent.difference(left));
        Partition::new(self.n, blocks)
    }

    /// Merges two blocks.
    pub fn merge(&self, a: Subset, b: Subset) -> Result<Partition> {
        if !self.contains_block(a) || !self.contains_block(b) || a == b {
            return Err(Error::Boundary(format!("cannot merge {:?} and {:?}", a, b)));
        }
        let mut blocks: Vec<Subset> = self
            .blocks
            .iter()
            .copied()
            .filter(|x| *x != a && *x != b)
            .collect();
        blocks.push(a.union(b));
        Partition::new(self.n, blocks)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            for i in b.iter() {
                write!(f, "{}", i + 1)?;
            }
        }
        write!(f, ")")
    }
}

/// Free-function form of [`Partition::is_finer`].
pub fn is_finer(q: &Partition, p: &Partition) -> Result<bool> {
    q.is_finer(p)
}

/// Free-function form of [`Partition::reduction`].
pub fn reduction(p: &Partition, e: Subset) -> Subset {
    p.reduction(e)
}

/// Whether `E` is `R`-semisimple with respect to `P`: its reduction modulo
/// `P` sits inside a single block of `R`.
pub fn is_r_semisimple(p: &Partition, r: &Partition, e: Subset) -> Result<bool> {
    if !p.is_finer(r)? {
        return Err(Error::NotFiner {
            finer: format!("{:?}", p),
            coarser: format!("{:?}", r),
        });
    }
    let red = p.reduction(e);
    if red.is_empty() {
        return Err(Error::EmptyModulo(format!("{:?}", e)));
    }
    Ok(r.blocks().iter().any(|b| red.is_subset_of(*b)))
}

/// All set partitions of `s`, each as blocks sorted by smallest element.
pub fn subset_partitions(s: Subset) -> Vec<Vec<Subset>> {
    let first = match s.min_element() {
        None => return vec![Vec::new()],
        Some(i) => i,
    };
    let rest = s.difference(Subset::singleton(first));
    let mut out = Vec::new();
    // the block of `first` is {first} plus any subset of the rest
    let mut sub = rest.bits();
    loop {
        let block = Subset(sub).union(Subset::singleton(first));
        for mut tail in subset_partitions(rest.difference(Subset(sub))) {
            tail.insert(0, block);
            tail.sort_by_key(|b| b.min_element());
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest.bits();
    }
    out.sort();
    out
}

/// Every partition of `{0, .., n-1}`, in a deterministic order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(i: usize, n: usize, blocks: &mut Vec<Subset>, out: &mut Vec<Partition>) {
        if i == n {
            out.push(Partition::new(n, blocks.clone()).expect("valid"));
            return;
        }
        for k in 0..blocks.len() {
            blocks[k] = blocks[k].union(Subset::singleton(i));
            rec(i + 1, n, blocks, out);
            blocks[k] = blocks[k].difference(Subset::singleton(i));
        }
        blocks.push(Subset::singleton(i));
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g9() -> GroundSet {
        GroundSet::numeric(9).unwrap()
    }

    #[test]
    fn subset_partition_counts() {
        assert_eq!(subset_partitions(Subset::EMPTY).len(), 1);
        assert_eq!(subset_partitions(Subset(0b10110)).len(), 5);
        assert_eq!(subset_partitions(Subset(0b11111)).len(), 52);
    }

    #[test]
    fn finer_examples() {
        let g = GroundSet::numeric(4).unwrap();
        let p = |s: &str| g.parse_partition(s).unwrap();
        assert!(p("(1|2|3|4)").is_finer(&p("(12|34)")).unwrap());
        assert!(p("(12|34)").is_finer(&p("(12|34)")).unwrap());
        assert!(!p("(12|34)").is_finer(&p("(13|24)")).unwrap());
        assert!(Partition::one_block(3).is_finer(&p("(12|34)")).is_err());
    }

    #[test]
    fn reduction_examples() {
        let g = g9();
        let p = g.parse_partition("(12|34|56|78|9)").unwrap();
        let e1 = g.parse_subset("3578").unwrap();
        assert_eq!(p.reduction(e1), g.parse_subset("35").unwrap());
        let e2 = g.parse_subset("135").unwrap();
        assert_eq!(p.reduction(e2), e2);
        assert_eq!(p.reduction(g.parse_subset("12349").unwrap()), Subset::EMPTY);
    }

    #[test]
    fn r_semisimple_examples() {
        let g = g9();
        let p = g.parse_partition("(12|34|56|78|9)").unwrap();
        let r1 = g.parse_partition("(12|3456|789)").unwrap();
        let r2 = g.parse_partition("(123456|789)").unwrap();
        let e1 = g.parse_subset("3578").unwrap();
        let e2 = g.parse_subset("135").unwrap();
        assert!(is_r_semisimple(&p, &r1, e1).unwrap());
        assert!(is_r_semisimple(&p, &r2, e1).unwrap());
        assert!(!is_r_semisimple(&p, &r1, e2).unwrap());
        assert!(is_r_semisimple(&p, &r2, e2).unwrap());
        let block = g.parse_subset("34").unwrap();
        assert!(matches!(
            is_r_semisimple(&p, &r1, block),
            Err(Error::EmptyModulo(_))
        ));
        assert!(matches!(
            is_r_semisimple(&r1, &p, e1),
            Err(Error::NotFiner { .. })
        ));
    }

    #[test]
    fn p_semisimple_is_semisimple_flat() {
        // with R = P a hyperplane is semisimple iff its reduction lies in one block
        for p in all_partitions(4) {
            for e in 1..15u64 {
                let e = Subset(e);
                if p.reduction(e).is_empty() {
                    continue;
                }
                let expect = p.blocks().iter().any(|b| p.reduction(e).is_subset_of(*b));
                assert_eq!(is_r_semisimple(&p, &p, e).unwrap(), expect);
            }
        }
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| all_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn finer_is_partial_order() {
        for n in 1..=5 {
            let ps = all_partitions(n);
            for a in &ps {
                assert!(a.is_finer(a).unwrap());
                for b in &ps {
                    if a != b && a.is_finer(b).unwrap() {
                        assert!(!b.is_finer(a).unwrap());
                    }
                    for c in &ps {
                        if a.is_finer(b).unwrap() && b.is_finer(c).unwrap() {
                            assert!(a.is_finer(c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn partition_text_round_trip() {
        let (g, p) = parse_partition_inferring_ground("(12|34|5)").unwrap();
        assert_eq!(g.format_partition(&p), "(12|34|5)");
        let (g, p) = parse_partition_inferring_ground("(a1,a2|b)").unwrap();
        assert_eq!(g.format_partition(&p), "(a1,a2|b)");
        assert_eq!(p.num_blocks(), 2);
        assert!(parse_partition_inferring_ground("12|3").is_err());
        let g = GroundSet::numeric(3).unwrap();
        assert!(g.parse_partition("(12|2|3)").is_err());
        assert!(g.parse_partition("(12)").is_err());
    }

    #[test]
    fn bad_ground_sets() {
        assert!(GroundSet::new(Vec::<String>::new()).is_err());
        assert!(GroundSet::new(["a", "a"]).is_err());
        assert!(GroundSet::new(["a|"]).is_err());
    }

    #[test]
    fn split_and_merge() {
        let p = Partition::one_block(3);
        let q = p.split(Subset(0b111), Subset(0b001)).unwrap();
        assert_eq!(q.blocks(), &[Subset(0b001), Subset(0b110)]);
        assert_eq!(q.merge(Subset(0b001), Subset(0b110)).unwrap(), p);
        assert!(p.split(Subset(0b111), Subset(0b111)).is_err());
    }

    proptest::proptest! {
        #[test]
        fn reduction_idempotent(blocks_seed in proptest::collection::vec(0usize..6, 6), e in 0u64..64) {
            // assign each of 6 elements to a block label
            let mut blocks: Vec<Subset> = Vec::new();
            let mut labels: Vec<usize> = Vec::new();
            for (i, l) in blocks_seed.iter().enumerate() {
                match labels.iter().position(|x| x == l) {
                    Some(k) => blocks[k] = blocks[k].union(Subset::singleton(i)),
                    None => { labels.push(*l); blocks.push(Subset::singleton(i)); }
                }
            }
            let p = Partition::new(6, blocks).unwrap();
            let r = p.reduction(Subset(e));
            proptest::prop_assert_eq!(p.reduction(r), r);
        }
    }
}
