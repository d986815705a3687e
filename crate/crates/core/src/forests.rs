//! Layered forests as ordered lists of cuts.
//!
//! Text form: `forest := tree ("|" tree)* ("@" i ("," i)*)?`,
//! `tree := leaf | "[" tree "," tree "]"`, `leaf := label+ | "{" label ("," label)* "}"`.
//! Nodes are numbered in pre-order (left subtree first, trees in text
//! order); the `@` suffix lists node numbers in layer order and is needed
//! only when more than one layering exists.

use std::fmt;

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Partition, Subset};

/// One-step refinement splitting `parent` into `left` and `parent - left`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    pub parent: Subset,
    pub left: Subset,
}

impl Cut {
    pub fn new(parent: Subset, left: Subset) -> Result<Cut> {
        if left.is_empty() || !left.is_subset_of(parent) || left == parent {
            return Err(Error::Boundary(format!(
                "{:?} is not a nonempty proper part of {:?}",
                left, parent
            )));
        }
        Ok(Cut { parent, left })
    }

    pub fn right(&self) -> Subset {
        self.parent.difference(self.left)
    }

    /// `[D, C]` for `[C, D]`.
    pub fn reversed(&self) -> Cut {
        Cut {
            parent: self.parent,
            left: self.right(),
        }
    }
}

impl fmt::Debug for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?},{:?}]", self.left, self.right())
    }
}

/// A morphism `P <- Q` of layered forests: `source` is the coarser
/// partition, and the cuts are applied outermost first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LayeredForest {
    source: Partition,
    target: Partition,
    cuts: Vec<Cut>,
}

impl LayeredForest {
    pub fn new(source: Partition, cuts: Vec<Cut>) -> Result<LayeredForest> {
        let mut target = source.clone();
        for c in &cuts {
            if !target.contains_block(c.parent) {
                return Err(Error::Boundary(format!(
                    "cut {:?} does not split a block of {:?}",
                    c, target
                )));
            }
            target = target.split(c.parent, c.left)?;
        }
        Ok(LayeredForest {
            source,
            target,
            cuts,
        })
    }

    /// The forest of sticks on `p`.
    pub fn identity(p: &Partition) -> LayeredForest {
        LayeredForest {
            source: p.clone(),
            target: p.clone(),
            cuts: Vec::new(),
        }
    }

    pub fn single(p: &Partition, cut: Cut) -> Result<LayeredForest> {
        LayeredForest::new(p.clone(), vec![cut])
    }

    pub fn source(&self) -> &Partition {
        &self.source
    }

    pub fn target(&self) -> &Partition {
        &self.target
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn num_cuts(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_identity(&self) -> bool {
        self.cuts.is_empty()
    }

    /// `self` followed by `cut` applied to the current target.
    pub fn then(&self, cut: Cut) -> Result<LayeredForest> {
        let mut cuts = self.cuts.clone();
        cuts.push(cut);
        LayeredForest::new(self.source.clone(), cuts)
    }

    /// Same forest with the cuts selected by `mask` reversed.
    pub fn with_reversed(&self, mask: u64) -> LayeredForest {
        let cuts = self
            .cuts
            .iter()
            .enumerate()
            .map(|(i, c)| if mask >> i & 1 == 1 { c.reversed() } else { *c })
            .collect();
        LayeredForest {
            source: self.source.clone(),
            target: self.target.clone(),
            cuts,
        }
    }

    /// True when the layering is the only one compatible with the trees.
    pub fn layering_is_forced(&self) -> bool {
        self.cuts
            .windows(2)
            .all(|w| w[1].parent == w[0].left || w[1].parent == w[0].right())
    }
}

impl fmt::Debug for LayeredForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = GroundSet::numeric(self.source.n().max(1)).map_err(|_| fmt::Error)?;
        write!(f, "{}", format_forest(&g, self))
    }
}

/// `F1 o F2`: all nodes of `F1` precede those of `F2`.
pub fn compose(f1: &LayeredForest, f2: &LayeredForest) -> Result<LayeredForest> {
    if f1.target != f2.source {
        return Err(Error::Boundary(format!(
            "target {:?} differs from source {:?}",
            f1.target, f2.source
        )));
    }
    let mut cuts = f1.cuts.clone();
    cuts.extend_from_slice(&f2.cuts);
    Ok(LayeredForest {
        source: f1.source.clone(),
        target: f2.target.clone(),
        cuts,
    })
}

/// A signed sum of forests with common boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedForestSum {
    pub terms: Vec<(i32, LayeredForest)>,
}

/// Alternating sum over all left/right switches; the input comes first.
pub fn antisymmetrize(f: &LayeredForest) -> SignedForestSum {
    let k = f.num_cuts();
    let terms = (0..1u64 << k)
        .map(|mask| {
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            (sign, f.with_reversed(mask))
        })
        .collect();
    SignedForestSum { terms }
}

fn format_leaf(ground: &GroundSet, s: Subset) -> String {
    if ground.compact() || s.len() == 1 {
        ground.format_subset(s)
    } else {
        format!("{{{}}}", ground.format_subset(s))
    }
}

fn format_tree(
    ground: &GroundSet,
    f: &LayeredForest,
    block: Subset,
    order: &mut Vec<Subset>,
    out: &mut String,
) {
    match f.cuts.iter().find(|c| c.parent == block) {
        None => out.push_str(&format_leaf(ground, block)),
        Some(c) => {
            order.push(block);
            out.push('[');
            format_tree(ground, f, c.left, order, out);
            out.push(',');
            format_tree(ground, f, c.right(), order, out);
            out.push(']');
        }
    }
}

/// Prints trees in block order; singleton sticks are left implicit.
pub fn format_forest(ground: &GroundSet, f: &LayeredForest) -> String {
    let mut order = Vec::new();
    let mut trees = Vec::new();
    let shown: Vec<Subset> = f
        .source
        .blocks()
        .iter()
        .copied()
        .filter(|b| b.len() > 1 || f.cuts.iter().any(|c| c.parent == *b))
        .collect();
    let shown = if shown.is_empty() {
        f.source.blocks().to_vec()
    } else {
        shown
    };
    for b in shown {
        let mut s = String::new();
        format_tree(ground, f, b, &mut order, &mut s);
        trees.push(s);
    }
    let mut text = trees.join("|");
    if !f.layering_is_forced() {
        let perm: Vec<String> = f
            .cuts
            .iter()
            .map(|c| {
                order
                    .iter()
                    .position(|b| *b == c.parent)
                    .expect("every cut is a printed node")
                    .to_string()
            })
            .collect();
        text.push('@');
        text.push_str(&perm.join(","));
    }
    text
}

enum Ast {
    Leaf(Subset),
    Node(Box<Ast>, Box<Ast>),
}

impl Ast {
    fn block(&self) -> Subset {
        match self {
            Ast::Leaf(s) => *s,
            Ast::Node(l, r) => l.block().union(r.block()),
        }
    }

    fn preorder(&self, out: &mut Vec<Cut>) {
        if let Ast::Node(l, r) = self {
            out.push(Cut {
                parent: self.block(),
                left: l.block(),
            });
            l.preorder(out);
            r.preorder(out);
        }
    }
}

struct Parser<'a> {
    ground: &'a GroundSet,
    chars: Vec<char>,
    pos: usize,
    used: Subset,
}

const SPECIAL: &str = "[]{},|@";

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c))
        }
    }

    fn label(&mut self, text: &str) -> Result<Subset> {
        let i = match self.ground.index_of(text) {
            Some(i) => i,
            None => return self.err(format!("unknown label {:?}", text)),
        };
        if self.used.contains(i) {
            return self.err(format!("label {:?} used twice", text));
        }
        self.used = self.used.union(Subset::singleton(i));
        Ok(Subset::singleton(i))
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_whitespace() || SPECIAL.contains(c) {
                break;
            }
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn leaf(&mut self) -> Result<Ast> {
        let mut s = Subset::EMPTY;
        if self.peek() == Some('{') {
            self.pos += 1;
            loop {
                self.skip_ws();
                let w = self.word();
                if w.is_empty() {
                    return self.err("expected a label");
                }
                s = s.union(self.label(&w)?);
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some('}') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or '}'"),
                }
            }
        } else {
            let start = self.pos;
            let w = self.word();
            if w.is_empty() {
                return self.err("expected a tree");
            }
            if self.ground.compact() {
                for c in w.chars() {
                    s = s.union(self.label(&c.to_string())?);
                }
            } else {
                let at = self.pos;
                self.pos = start;
                s = self.label(&w)?;
                self.pos = at;
            }
        }
        Ok(Ast::Leaf(s))
    }

    fn tree(&mut self) -> Result<Ast> {
        if self.peek() == Some('[') {
            self.pos += 1;
            let l = self.tree()?;
            self.expect(',')?;
            let r = self.tree()?;
            self.expect(']')?;
            Ok(Ast::Node(Box::new(l), Box::new(r)))
        } else {
            self.leaf()
        }
    }

    fn layering(&mut self) -> Result<Option<Vec<usize>>> {
        if self.peek() != Some('@') {
            return Ok(None);
        }
        self.pos += 1;
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let w = self.word();
            match w.parse::<usize>() {
                Ok(i) => out.push(i),
                Err(_) => return self.err("expected a node number"),
            }
            if self.peek() == Some(',') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Some(out))
    }
}

fn parse_parts(ground: &GroundSet, text: &str) -> Result<(Vec<Ast>, Option<Vec<usize>>)> {
    let mut p = Parser {
        ground,
        chars: text.chars().collect(),
        pos: 0,
        used: Subset::EMPTY,
    };
    let mut trees = vec![p.tree()?];
    while p.peek() == Some('|') {
        p.pos += 1;
        trees.push(p.tree()?);
    }
    let layering = p.layering()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok((trees, layering))
}

fn assemble(
    source: Partition,
    trees: &[Ast],
    layering: Option<Vec<usize>>,
) -> Result<LayeredForest> {
    let mut nodes = Vec::new();
    for t in trees {
        t.preorder(&mut nodes);
    }
    let cuts = match layering {
        None => {
            let f = LayeredForest::new(source, nodes)?;
            if !f.layering_is_forced() {
                return Err(Error::AmbiguousLayering(
                    "several layerings exist; add an @ suffix".into(),
                ));
            }
            return Ok(f);
        }
        Some(perm) => {
            let mut seen = vec![false; nodes.len()];
            for &i in &perm {
                if i >= nodes.len() || seen[i] {
                    return Err(Error::Syntax {
                        pos: 0,
                        msg: format!("layering must permute 0..{}", nodes.len()),
                    });
                }
                seen[i] = true;
            }
            if perm.len() != nodes.len() {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: format!("layering must permute 0..{}", nodes.len()),
                });
            }
            perm.iter().map(|&i| nodes[i]).collect()
        }
    };
    LayeredForest::new(source, cuts).map_err(|_| Error::Syntax {
        pos: 0,
        msg: "layering puts a node before its parent".into(),
    })
}

/// Parses a forest; elements not mentioned become singleton sticks.
pub fn parse_forest(ground: &GroundSet, text: &str) -> Result<LayeredForest> {
    let (trees, layering) = parse_parts(ground, text)?;
    let roots: Vec<Subset> = trees.iter().map(Ast::block).collect();
    let source = Partition::completed_with_singletons(ground.len(), &roots)?;
    assemble(source, &trees, layering)
}

/// Parses a forest whose source is `p`; every tree must span a block of
/// `p`, and the remaining blocks become sticks.
pub fn parse_forest_over(ground: &GroundSet, p: &Partition, text: &str) -> Result<LayeredForest> {
    if ground.len() != p.n() {
        return Err(Error::GroundMismatch(ground.len(), p.n()));
    }
    let (trees, layering) = parse_parts(ground, text)?;
    for t in &trees {
        if !p.contains_block(t.block()) {
            return Err(Error::Boundary(format!(
                "tree over {} is not on a block of {}",
                ground.format_subset(t.block()),
                ground.format_partition(p)
            )));
        }
    }
    assemble(p.clone(), &trees, layering)
}

/// Every cut that can be applied to `p`.
pub fn cuts_of(p: &Partition) -> Vec<Cut> {
    let mut out = Vec::new();
    for b in p.blocks() {
        for left in b.proper_nonempty_subsets() {
            out.push(Cut { parent: *b, left });
        }
    }
    out.sort();
    out
}

/// All layered forests out of `p` with at most `max_cuts` cuts, identity
/// included, in lexicographic order of cut lists.
pub fn all_forests(p: &Partition, max_cuts: usize) -> Vec<LayeredForest> {
    let mut out = vec![LayeredForest::identity(p)];
    let mut frontier = out.clone();
    for _ in 0..max_cuts {
        let mut next = Vec::new();
        for f in &frontier {
            for c in cuts_of(&f.target) {
                next.push(f.then(c).expect("cut of the target"));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort_by(|a, b| a.cuts.cmp(&b.cuts));
    out
}

/// All interleavings of several cut lists, each kept in its own order.
pub fn interleavings(lists: &[Vec<Cut>]) -> Vec<Vec<Cut>> {
    lists.iter().fold(vec![Vec::new()], |acc, l| {
        acc.iter().flat_map(|a| shuffles(a, l)).collect()
    })
}

/// Every layering of the trees of `f`, `f` itself included, sorted.
pub fn relayerings(f: &LayeredForest) -> Vec<LayeredForest> {
    fn go(
        f: &LayeredForest,
        current: &Partition,
        used: &mut Vec<bool>,
        acc: &mut Vec<Cut>,
        out: &mut Vec<Vec<Cut>>,
    ) {
        if acc.len() == f.cuts.len() {
            out.push(acc.clone());
            return;
        }
        for i in 0..f.cuts.len() {
            let c = f.cuts[i];
            if used[i] || !current.contains_block(c.parent) {
                continue;
            }
            used[i] = true;
            acc.push(c);
            let next = current.split(c.parent, c.left).expect("parent is a block");
            go(f, &next, used, acc, out);
            acc.pop();
            used[i] = false;
        }
    }
    let mut out = Vec::new();
    go(
        f,
        &f.source,
        &mut vec![false; f.cuts.len()],
        &mut Vec::new(),
        &mut out,
    );
    out.sort();
    out.into_iter()
        .map(|cuts| LayeredForest {
            source: f.source.clone(),
            target: f.target.clone(),
            cuts,
        })
        .collect()
}

fn shuffles(a: &[Cut], b: &[Cut]) -> Vec<Vec<Cut>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for mut s in shuffles(&a[1..], b) {
        s.insert(0, a[0]);
        out.push(s);
    }
    for mut s in shuffles(a, &b[1..]) {
        s.insert(0, b[0]);
        out.push(s);
    }
    out
}

/// Cut lists of all layered binary trees with the given leaf blocks.
pub fn layered_tree_cuts(leaves: &[Subset]) -> Vec<Vec<Cut>> {
    let mut all = layered_trees(leaves);
    all.sort();
    all.dedup();
    all
}

fn layered_trees(leaves: &[Subset]) -> Vec<Vec<Cut>> {
    if leaves.len() == 1 {
        return vec![Vec::new()];
    }
    let block = leaves.iter().fold(Subset::EMPTY, |a, b| a.union(*b));
    let k = leaves.len();
    let mut out = Vec::new();
    for mask in 1..(1u32 << k) - 1 {
        let l: Vec<Subset> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| leaves[i])
            .collect();
        let r: Vec<Subset> = (0..k)
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| leaves[i])
            .collect();
        let left = l.iter().fold(Subset::EMPTY, |a, b| a.union(*b));
        for tl in layered_trees(&l) {
            for tr in layered_trees(&r) {
                for s in shuffles(&tl, &tr) {
                    let mut cuts = vec![Cut {
                        parent: block,
                        left,
                    }];
                    cuts.extend(s);
                    out.push(cuts);
                }
            }
        }
    }
    out
}

/// All layered binary trees on `block` with the given leaf blocks, the
/// other blocks of `p` completed as sticks.
pub fn all_trees(p: &Partition, block: Subset, leaves: &[Subset]) -> Result<Vec<LayeredForest>> {
    if !p.contains_block(block) {
        return Err(Error::Boundary(format!(
            "{:?} is not a block of {:?}",
            block, p
        )));
    }
    let mut covered = Subset::EMPTY;
    for l in leaves {
        if l.is_empty() || covered.meets(*l) {
            return Err(Error::InvalidPartition(
                "leaves must be disjoint and nonempty".into(),
            ));
        }
        covered = covered.union(*l);
    }
    if covered != block {
        return Err(Error::InvalidPartition(
            "leaves must cover the block".into(),
        ));
    }
    let mut all: Vec<Vec<Cut>> = layered_trees(leaves);
    all.sort();
    all.dedup();
    all.into_iter()
        .map(|cuts| LayeredForest::new(p.clone(), cuts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::numeric(n).unwrap()
    }

    fn s(gr: &GroundSet, t: &str) -> Subset {
        gr.parse_subset(t).unwrap()
    }

    #[test]
    fn parse_examples() {
        let gr = g(3);
        let f = parse_forest(&gr, "[1,23]").unwrap();
        assert_eq!(f.cuts(), &[Cut::new(s(&gr, "123"), s(&gr, "1")).unwrap()]);
        assert_eq!(f.target(), &gr.parse_partition("(1|23)").unwrap());

        let gr = g(5);
        let f = parse_forest(&gr, "[[2,3],5]").unwrap();
        assert_eq!(f.source(), &gr.parse_partition("(1|235|4)").unwrap());
        assert_eq!(
            f.cuts(),
            &[
                Cut::new(s(&gr, "235"), s(&gr, "23")).unwrap(),
                Cut::new(s(&gr, "23"), s(&gr, "2")).unwrap()
            ]
        );
    }

    #[test]
    fn two_layerings() {
        let gr = g(4);
        assert!(matches!(
            parse_forest(&gr, "[[1,2],[3,4]]"),
            Err(Error::AmbiguousLayering(_))
        ));
        let a = parse_forest(&gr, "[[1,2],[3,4]]@0,1,2").unwrap();
        let b = parse_forest(&gr, "[[1,2],[3,4]]@0,2,1").unwrap();
        assert_ne!(a, b);
        assert_eq!(a.cuts()[1].parent, s(&gr, "12"));
        assert_eq!(b.cuts()[1].parent, s(&gr, "34"));
        assert!(matches!(
            parse_forest(&gr, "[[1,2],[3,4]]@1,0,2"),
            Err(Error::Syntax { .. })
        ));
        assert_eq!(format_forest(&gr, &b), "[[1,2],[3,4]]@0,2,1");
    }

    #[test]
    fn syntax_errors() {
        let gr = g(3);
        for bad in [
            "",
            "[1,2",
            "[1,1]",
            "[1,5]",
            "[1,2]]",
            "[1,2]@x",
            "[1,2]@0,0",
        ] {
            assert!(parse_forest(&gr, bad).is_err(), "{:?}", bad);
        }
        match parse_forest(&gr, "[1,2]x") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn multi_char_labels() {
        let gr = GroundSet::new(["a1", "b2", "c3"]).unwrap();
        let f = parse_forest(&gr, "[a1,{b2,c3}]").unwrap();
        assert_eq!(format_forest(&gr, &f), "[a1,{b2,c3}]");
        assert_eq!(f.cuts()[0].left, Subset::singleton(0));
    }

    #[test]
    fn compose_examples() {
        let gr = g(4);
        let outer = parse_forest(&gr, "[12,34]").unwrap();
        let inner = parse_forest_over(&gr, outer.target(), "[1,2]|[3,4]@0,1").unwrap();
        let c = compose(&outer, &inner).unwrap();
        assert_eq!(c, parse_forest(&gr, "[[1,2],[3,4]]@0,1,2").unwrap());
        let id = LayeredForest::identity(outer.source());
        assert_eq!(compose(&id, &outer).unwrap(), outer);
        assert_eq!(
            compose(&outer, &LayeredForest::identity(outer.target())).unwrap(),
            outer
        );
        assert!(matches!(compose(&inner, &outer), Err(Error::Boundary(_))));
    }

    #[test]
    fn antisymmetrize_examples() {
        let gr = g(3);
        let f = parse_forest(&gr, "[[1,2],3]").unwrap();
        let a = antisymmetrize(&f);
        let expect = [
            (1, "[[1,2],3]"),
            (-1, "[3,[1,2]]"),
            (-1, "[[2,1],3]"),
            (1, "[3,[2,1]]"),
        ];
        assert_eq!(a.terms.len(), 4);
        for (sign, t) in expect {
            let target = parse_forest(&gr, t).unwrap();
            assert!(a.terms.contains(&(sign, target)), "{}", t);
        }
        assert_eq!(a.terms[0], (1, f));
        let id = LayeredForest::identity(&Partition::one_block(3));
        assert_eq!(antisymmetrize(&id).terms, vec![(1, id)]);
    }

    #[test]
    fn tree_counts() {
        let p = Partition::one_block(3);
        let leaves = [Subset(1), Subset(2), Subset(4)];
        assert_eq!(all_trees(&p, Subset(7), &leaves).unwrap().len(), 12);
        assert_eq!(all_trees(&p, Subset(7), &[Subset(7)]).unwrap().len(), 1);
        assert_eq!(
            all_trees(&p, Subset(7), &[Subset(3), Subset(4)])
                .unwrap()
                .len(),
            2
        );
        // 120 ordered trees on 4 leaves; the 24 balanced ones have two layerings
        let p4 = Partition::one_block(4);
        let l4: Vec<Subset> = (0..4).map(Subset::singleton).collect();
        assert_eq!(all_trees(&p4, Subset(15), &l4).unwrap().len(), 120 + 24);
        assert!(all_trees(&p, Subset(7), &[Subset(3)]).is_err());
    }

    #[test]
    fn round_trip_all_forests() {
        for n in 1..=4 {
            let gr = g(n);
            for p in crate::ground::all_partitions(n) {
                for f in all_forests(&p, 3) {
                    let text = format_forest(&gr, &f);
                    assert_eq!(parse_forest_over(&gr, &p, &text).unwrap(), f, "{}", text);
                }
            }
        }
    }

    #[test]
    fn composition_associative() {
        let p = Partition::one_block(4);
        let fs = all_forests(&p, 1);
        for a in &fs {
            for b in all_forests(a.target(), 1) {
                for c in all_forests(b.target(), 1) {
                    let l = compose(&compose(a, &b).unwrap(), &c).unwrap();
                    let r = compose(a, &compose(&b, &c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn relayering_counts() {
        let gr = g(4);
        let f = parse_forest(&gr, "[[1,2],[3,4]]@0,2,1").unwrap();
        assert_eq!(relayerings(&f).len(), 2);
        let f = parse_forest(&gr, "[[[1,2],3],4]").unwrap();
        assert_eq!(relayerings(&f), vec![f]);
        let two = interleavings(&[
            vec![Cut::new(Subset(3), Subset(1)).unwrap()],
            vec![Cut::new(Subset(12), Subset(4)).unwrap()],
        ]);
        assert_eq!(two.len(), 2);
    }

    #[test]
    fn antisymmetrize_sign_sum() {
        for f in all_forests(&Partition::one_block(4), 3) {
            let a = antisymmetrize(&f);
            assert_eq!(a.terms.len(), 1 << f.num_cuts());
            let sum: i32 = a.terms.iter().map(|t| t.0).sum();
            assert_eq!(sum, if f.num_cuts() == 0 { 1 } else { 0 });
        }
    }
}
