//! Binary forest diagrams: the canonical form for elements of the positive
//! monoid P of Thompson's group F.
//!
//! A forest is an ordered sequence of rooted binary trees followed by an
//! implicit infinite tail of trivial (single-leaf) trees; trailing trivial
//! trees are trimmed so that structural equality is element equality in P.
//! Right multiplication by the generator `x_i` adds a caret joining the
//! roots at positions `i` and `i+1` (roots counted from 0).

use std::fmt;
use std::str::FromStr;

use crate::error::{ParseError, WordError};
use crate::word::{Letter, Word};

/// A rooted binary tree: every node has zero or two ordered children.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn caret() -> Tree {
        Tree::Node(Box::new(Tree::Leaf), Box::new(Tree::Leaf))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Replaces the leaves of `self`, in left-to-right order, by trees drawn
    /// from `supply` (trivial beyond its end), advancing `next` past the
    /// consumed ones.
    fn substitute(&self, supply: &[Tree], next: &mut usize) -> Tree {
        match self {
            Tree::Leaf => {
                let t = supply.get(*next).cloned().unwrap_or(Tree::Leaf);
                *next += 1;
                t
            }
            Tree::Node(l, r) => {
                let nl = l.substitute(supply, next);
                let nr = r.substitute(supply, next);
                Tree::Node(Box::new(nl), Box::new(nr))
            }
        }
    }

    /// Collects the left-leaf index of every caret whose children are both
    /// leaves; `base` is the global index of this subtree's first leaf.
    fn leaf_carets(&self, base: usize, out: &mut Vec<usize>) -> usize {
        match self {
            Tree::Leaf => base + 1,
            Tree::Node(l, r) => {
                if l.is_leaf() && r.is_leaf() {
                    out.push(base);
                }
                let mid = l.leaf_carets(base, out);
                r.leaf_carets(mid, out)
            }
        }
    }

    /// Replaces the leaf-caret whose left leaf has global index `target` by a
    /// single leaf. Returns the remaining leaf count.
    fn contract(&self, base: usize, target: usize, out: &mut Tree) -> usize {
        match self {
            Tree::Leaf => {
                *out = Tree::Leaf;
                base + 1
            }
            Tree::Node(l, r) => {
                if l.is_leaf() && r.is_leaf() && base == target {
                    *out = Tree::Leaf;
                    return base + 2;
                }
                let mut nl = Tree::Leaf;
                let mut nr = Tree::Leaf;
                let mid = l.contract(base, target, &mut nl);
                let end = r.contract(mid, target, &mut nr);
                *out = Tree::Node(Box::new(nl), Box::new(nr));
                end
            }
        }
    }
}

/// A bounded binary forest in canonical (trimmed) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct BinaryForest {
    trees: Vec<Tree>,
}

impl BinaryForest {
    /// The trivial forest, the identity of P.
    pub fn trivial() -> Self {
        BinaryForest { trees: Vec::new() }
    }

    pub fn from_trees(trees: Vec<Tree>) -> Self {
        let mut f = BinaryForest { trees };
        f.trim();
        f
    }

    fn trim(&mut self) {
        while self.trees.last().is_some_and(Tree::is_leaf) {
            self.trees.pop();
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.trees.is_empty()
    }

    /// Stored trees (the implicit trivial tail is not included).
    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    /// Number of stored trees; every tree beyond this is trivial.
    pub fn width(&self) -> usize {
        self.trees.len()
    }

    /// Total leaves among the stored trees.
    pub fn stored_leaves(&self) -> usize {
        self.trees.iter().map(Tree::leaf_count).sum()
    }

    /// Total carets; equals the length of any positive word for the element.
    pub fn caret_count(&self) -> usize {
        self.stored_leaves() - self.width()
    }

    /// The forest of the generator `x_n`: all trees trivial except the one at
    /// position `n`, which is a single caret.
    pub fn generator(n: u32) -> Self {
        let mut trees = vec![Tree::Leaf; n as usize];
        trees.push(Tree::caret());
        BinaryForest { trees }
    }

    /// Right multiplication by `x_i`: a caret joins the roots at positions
    /// `i` and `i+1`, pulling in trivial trees from the tail as needed.
    pub fn add_caret(&self, i: usize) -> Self {
        let mut trees = self.trees.clone();
        while trees.len() < i + 2 {
            trees.push(Tree::Leaf);
        }
        let right = trees.remove(i + 1);
        let left = std::mem::replace(&mut trees[i], Tree::Leaf);
        trees[i] = Tree::Node(Box::new(left), Box::new(right));
        let mut f = BinaryForest { trees };
        f.trim();
        f
    }

    /// Right division by `x_i`: undoes [`BinaryForest::add_caret`] when the
    /// tree at position `i` is nontrivial, i.e. decides whether
    /// `self * x_i^-1` stays in the positive monoid.
    pub fn detach_caret(&self, i: usize) -> Option<Self> {
        match self.trees.get(i) {
            Some(Tree::Node(l, r)) => {
                let mut trees = self.trees.clone();
                trees[i] = (**l).clone();
                trees.insert(i + 1, (**r).clone());
                let mut f = BinaryForest { trees };
                f.trim();
                Some(f)
            }
            _ => None,
        }
    }

    /// Right multiplication by a letter, `None` when an inverse letter leaves
    /// the positive monoid.
    pub fn right_multiply(&self, l: Letter) -> Option<Self> {
        if l.inverse {
            self.detach_caret(l.index as usize)
        } else {
            Some(self.add_caret(l.index as usize))
        }
    }

    /// The monoid product: stacks `other` on top of `self`, attaching the
    /// i-th leaf of `other` to the i-th root of `self`.
    pub fn product(&self, other: &BinaryForest) -> Self {
        let mut next = 0usize;
        let mut trees: Vec<Tree> = other
            .trees
            .iter()
            .map(|t| t.substitute(&self.trees, &mut next))
            .collect();
        // Roots of self beyond the stored leaves of other attach to the
        // trivial tail of other, i.e. stay roots.
        if next < self.trees.len() {
            trees.extend_from_slice(&self.trees[next..]);
        }
        let mut f = BinaryForest { trees };
        f.trim();
        f
    }

    /// All ways to peel off a bottom generator on the left: pairs
    /// `(m, rest)` with `self = x_m * rest` in P. The caret laid down first
    /// by `x_m` joins the adjacent leaves `m` and `m+1`, so candidates are
    /// exactly the leaf-carets of the forest.
    pub fn left_factorizations(&self) -> Vec<(usize, BinaryForest)> {
        let mut positions = Vec::new();
        let mut base = 0usize;
        for t in &self.trees {
            base = t.leaf_carets(base, &mut positions);
        }
        positions.sort_unstable();
        positions
            .into_iter()
            .map(|m| {
                let mut trees = Vec::with_capacity(self.trees.len());
                let mut at = 0usize;
                for t in &self.trees {
                    let mut nt = Tree::Leaf;
                    at = t.contract(at, m, &mut nt);
                    trees.push(nt);
                }
                let mut rest = BinaryForest { trees };
                rest.trim();
                (m, rest)
            })
            .collect()
    }

    /// True iff the element is a (possibly empty) word over `{x_0, x_1}`.
    ///
    /// Words over `{x_0, x_1}` keep the stored width at most 2, and the last
    /// letter is forced by the shape: width 1 ends in `x_0`, width 2 ends in
    /// `x_1` with the top caret's right child trivial. Undoing letters one at
    /// a time therefore decides membership without search.
    pub fn is_letter01_word(&self) -> bool {
        let mut trees = self.trees.clone();
        loop {
            match trees.len() {
                0 => return true,
                1 => match trees.pop().unwrap() {
                    Tree::Leaf => unreachable!("trimmed forest"),
                    Tree::Node(l, r) => {
                        trees.push(*l);
                        trees.push(*r);
                    }
                },
                2 => match trees.pop().unwrap() {
                    Tree::Node(b, r) if r.is_leaf() => trees.push(*b),
                    _ => return false,
                },
                _ => return false,
            }
            while trees.last().is_some_and(Tree::is_leaf) {
                trees.pop();
            }
        }
    }

    /// True iff the element has the shape `x_m u` with `u` a word over
    /// `{x_0, x_1}` (for any `m >= 0`).
    pub fn is_xn_u_form(&self) -> bool {
        self.left_factorizations()
            .iter()
            .any(|(_, rest)| rest.is_letter01_word())
    }
}

/// Builds the canonical forest of a positive word by caret insertion, one
/// letter at a time.
pub fn word_to_forest(w: &Word) -> Result<BinaryForest, WordError> {
    let mut f = BinaryForest::trivial();
    for l in &w.letters {
        if l.inverse {
            return Err(WordError::NegativeLetter(l.index));
        }
        f = f.add_caret(l.index as usize);
    }
    Ok(f)
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => write!(f, "."),
            Tree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

impl fmt::Display for BinaryForest {
    /// Nested-parentheses list, e.g. `[., ., ((.,.),.)]`; the trivial forest
    /// renders as `[]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for BinaryForest {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::Forest(s.to_string());
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let mut trees = Vec::new();
        let mut chars = body.chars().peekable();
        loop {
            while matches!(chars.peek(), Some(c) if c.is_whitespace() || *c == ',') {
                chars.next();
            }
            if chars.peek().is_none() {
                break;
            }
            trees.push(parse_tree(&mut chars).ok_or_else(bad)?);
        }
        Ok(BinaryForest::from_trees(trees))
    }
}

fn parse_tree(chars: &mut std::iter::Peekable<std::str::Chars<'_>>) -> Option<Tree> {
    while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
        chars.next();
    }
    match chars.next()? {
        '.' => Some(Tree::Leaf),
        '(' => {
            let l = parse_tree(chars)?;
            while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                chars.next();
            }
            if chars.next()? != ',' {
                return None;
            }
            let r = parse_tree(chars)?;
            while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                chars.next();
            }
            if chars.next()? != ')' {
                return None;
            }
            Some(Tree::Node(Box::new(l), Box::new(r)))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(indices: &[u32]) -> BinaryForest {
        word_to_forest(&Word::positive(indices)).unwrap()
    }

    #[test]
    fn generator_forests() {
        assert_eq!(BinaryForest::generator(0).trees(), &[Tree::caret()]);
        let x3 = BinaryForest::generator(3);
        assert_eq!(x3.width(), 4);
        assert!(x3.trees()[..3].iter().all(Tree::is_leaf));
        assert_eq!(x3.trees()[3], Tree::caret());
        for n in 0..6u32 {
            assert_eq!(BinaryForest::generator(n).stored_leaves(), n as usize + 2);
        }
    }

    #[test]
    fn product_identity_and_stacking() {
        let f = pw(&[0, 2, 1]);
        let e = BinaryForest::trivial();
        assert_eq!(f.product(&e), f);
        assert_eq!(e.product(&f), f);
        // x_0 * x_0: the second caret attaches to the first root, giving a
        // left comb at position 0.
        let comb = BinaryForest::generator(0).product(&BinaryForest::generator(0));
        assert_eq!(
            comb.trees(),
            &[Tree::Node(Box::new(Tree::caret()), Box::new(Tree::Leaf))]
        );
        assert_eq!(comb, pw(&[0, 0]));
    }

    #[test]
    fn word_building_matches_products() {
        // word_to_forest is the iterated product of generator forests
        let w = Word::positive(&[2, 0, 1, 3]);
        let by_product = w.letters.iter().fold(BinaryForest::trivial(), |acc, l| {
            acc.product(&BinaryForest::generator(l.index))
        });
        assert_eq!(word_to_forest(&w).unwrap(), by_product);
        assert!(word_to_forest(&"x0 x1^-1".parse().unwrap()).is_err());
        assert_eq!(
            word_to_forest(&Word::empty()).unwrap(),
            BinaryForest::trivial()
        );
        assert_eq!(pw(&[3]), BinaryForest::generator(3));
    }

    #[test]
    fn relations_absorb() {
        // x_k x_n = x_{n+1} x_k for k < n
        for k in 0..8u32 {
            for n in (k + 1)..=8 {
                assert_eq!(pw(&[k, n]), pw(&[n + 1, k]), "x{k} x{n} = x{} x{k}", n + 1);
            }
        }
    }

    #[test]
    fn detach_undoes_add() {
        let f = pw(&[2, 1, 0]);
        for i in 0..4 {
            let g = f.add_caret(i);
            assert_eq!(g.detach_caret(i), Some(f.clone()));
        }
        // x_1 has a trivial tree at position 0: x_1 * x_0^-1 is not positive
        assert_eq!(BinaryForest::generator(1).detach_caret(0), None);
        assert_eq!(BinaryForest::trivial().detach_caret(0), None);
    }

    #[test]
    fn left_factorizations_cover_bottom_carets() {
        // x_2 x_0 = x_0 x_1 has two leaf-carets and both factorizations
        let f = pw(&[2, 0]);
        assert_eq!(f, pw(&[0, 1]));
        let facts = f.left_factorizations();
        assert_eq!(facts.len(), 2);
        // peeling the bottom x_0 leaves x_1; peeling the bottom x_2 leaves x_0
        assert_eq!(facts[0], (0, BinaryForest::generator(1)));
        assert_eq!(facts[1], (2, BinaryForest::generator(0)));
        for (m, rest) in facts {
            assert_eq!(BinaryForest::generator(m as u32).product(&rest), f);
        }
    }

    #[test]
    fn letter01_words() {
        assert!(BinaryForest::trivial().is_letter01_word());
        assert!(pw(&[0]).is_letter01_word());
        assert!(pw(&[1]).is_letter01_word());
        assert!(pw(&[0, 1, 0, 0, 1]).is_letter01_word());
        assert!(!BinaryForest::generator(2).is_letter01_word());
        assert!(!pw(&[2, 2]).is_letter01_word());
        // x_2 x_0 = x_0 x_1 IS a {0,1}-word
        assert!(pw(&[2, 0]).is_letter01_word());
    }

    #[test]
    fn xn_u_membership() {
        assert!(pw(&[4]).is_xn_u_form());
        assert!(pw(&[4, 0, 1]).is_xn_u_form());
        assert!(pw(&[0, 1, 1]).is_xn_u_form());
        // x_2 x_2 is positive but not of the shape x_m u, u over {x0,x1}
        assert!(!pw(&[2, 2]).is_xn_u_form());
        // detaching x_0 from x_4 x_0 x_1 leaves P but exits the x_n u shape
        let f = pw(&[4, 0, 1]).detach_caret(0).unwrap();
        assert!(!f.is_xn_u_form());
    }

    #[test]
    fn display_and_parse() {
        let f = pw(&[0, 0]);
        assert_eq!(f.to_string(), "[((.,.),.)]");
        let g = BinaryForest::from_trees(vec![Tree::Leaf, Tree::Leaf, {
            Tree::Node(Box::new(Tree::caret()), Box::new(Tree::Leaf))
        }]);
        assert_eq!(g.to_string(), "[., ., ((.,.),.)]");
        for h in [f, g, BinaryForest::trivial(), pw(&[3, 1, 0, 2])] {
            assert_eq!(h.to_string().parse::<BinaryForest>().unwrap(), h);
        }
        assert!("[(.,.]".parse::<BinaryForest>().is_err());
    }
}
