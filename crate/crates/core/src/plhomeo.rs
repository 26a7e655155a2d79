//! Elements of Thompson's group F as piecewise-linear homeomorphisms of
//! [0,1] with dyadic breakpoints and power-of-two slopes.
//!
//! Values are kept in canonical form (no redundant breakpoints), so
//! structural equality *is* equality of group elements and a `PLHomeo` can be
//! used directly as a hash key. The composition convention throughout is
//! `(fg)(x) = g(f(x))`: `f.compose(&g)` applies `f` first.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{LazyLock, RwLock};

use crate::dyadic::Dyadic;
use crate::error::HomeoError;

/// A strictly increasing piecewise-linear homeomorphism of [0,1], stored as
/// the canonical list of its breakpoints `(t, f(t))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PLHomeo {
    pairs: Vec<(Dyadic, Dyadic)>,
}

impl PLHomeo {
    /// Validating constructor from breakpoint pairs.
    ///
    /// Requires endpoints (0,0) and (1,1), strict monotonicity in both
    /// coordinates, and every segment slope a positive integer power of two.
    /// Redundant breakpoints are dropped.
    pub fn try_new(pairs: Vec<(Dyadic, Dyadic)>) -> Result<Self, HomeoError> {
        if pairs.len() < 2 {
            return Err(HomeoError::NotAMember("fewer than two breakpoints"));
        }
        let first = pairs.first().unwrap();
        let last = pairs.last().unwrap();
        if !first.0.is_zero() || !first.1.is_zero() {
            return Err(HomeoError::NotAMember("must fix 0"));
        }
        if *last != (Dyadic::one(), Dyadic::one()) {
            return Err(HomeoError::NotAMember("must fix 1"));
        }
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(HomeoError::NotAMember(
                    "breakpoints not strictly increasing",
                ));
            }
            let dv = &w[1].1 - &w[0].1;
            let db = &w[1].0 - &w[0].0;
            if dv.pow2_ratio(&db).is_none() {
                return Err(HomeoError::NotAMember(
                    "segment slope is not a power of two",
                ));
            }
        }
        Ok(PLHomeo {
            pairs: canonicalize(pairs),
        })
    }

    /// True iff the breakpoint data describes a group element; the boolean
    /// face of [`PLHomeo::try_new`].
    pub fn validate_membership(pairs: &[(Dyadic, Dyadic)]) -> bool {
        PLHomeo::try_new(pairs.to_vec()).is_ok()
    }

    /// Internal constructor for data that is already mathematically valid.
    fn from_valid(pairs: Vec<(Dyadic, Dyadic)>) -> Self {
        let g = PLHomeo {
            pairs: canonicalize(pairs),
        };
        debug_assert!(PLHomeo::validate_membership(&g.pairs));
        g
    }

    pub fn identity() -> Self {
        PLHomeo {
            pairs: vec![
                (Dyadic::zero(), Dyadic::zero()),
                (Dyadic::one(), Dyadic::one()),
            ],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.len() == 2
    }

    /// The generator `x_n`. `x_0` and `x_1` are the two standard generators;
    /// for n >= 2, `x_n = x_0^(n-1) x_1 x_0^-(n-1)`, which under the
    /// composition convention acts as t -> x_0^-(n-1)(x_1(x_0^(n-1)(t))).
    pub fn generator(n: u32) -> Self {
        static CACHE: LazyLock<RwLock<Vec<PLHomeo>>> =
            LazyLock::new(|| RwLock::new(vec![x0_table(), x1_table()]));
        if let Some(g) = CACHE.read().unwrap().get(n as usize) {
            return g.clone();
        }
        let mut cache = CACHE.write().unwrap();
        while cache.len() <= n as usize {
            // x_{m+1} = x_0 x_m x_0^{-1}  (products read left to right)
            let x0 = cache[0].clone();
            let prev = cache.last().unwrap();
            let next = x0.compose(prev).compose(&x0.invert());
            cache.push(next);
        }
        cache[n as usize].clone()
    }

    pub fn breakpoints(&self) -> &[(Dyadic, Dyadic)] {
        &self.pairs
    }

    /// Exact image of a point of [0,1].
    pub fn evaluate(&self, t: &Dyadic) -> Result<Dyadic, HomeoError> {
        if t < &Dyadic::zero() || t > &Dyadic::one() {
            return Err(HomeoError::OutOfDomain(t.to_string()));
        }
        Ok(eval_pairs(&self.pairs, t))
    }

    /// Exact preimage of a point of [0,1].
    pub fn evaluate_inverse(&self, v: &Dyadic) -> Result<Dyadic, HomeoError> {
        if v < &Dyadic::zero() || v > &Dyadic::one() {
            return Err(HomeoError::OutOfDomain(v.to_string()));
        }
        Ok(eval_pairs_swapped(&self.pairs, v))
    }

    /// The product `self * other` under the convention
    /// `(fg)(x) = g(f(x))`: `self` acts first.
    pub fn compose(&self, other: &PLHomeo) -> PLHomeo {
        // Breakpoints of the product: ours, plus the preimages of the other
        // factor's breakpoints under self.
        let mut ts: BTreeSet<Dyadic> = self.pairs.iter().map(|p| p.0.clone()).collect();
        for (b, _) in &other.pairs {
            ts.insert(eval_pairs_swapped(&self.pairs, b));
        }
        let pairs = ts
            .into_iter()
            .map(|t| {
                let mid = eval_pairs(&self.pairs, &t);
                let v = eval_pairs(&other.pairs, &mid);
                (t, v)
            })
            .collect();
        PLHomeo::from_valid(pairs)
    }

    /// The group inverse: swap the two coordinates of every breakpoint.
    pub fn invert(&self) -> PLHomeo {
        PLHomeo {
            pairs: self
                .pairs
                .iter()
                .map(|(b, v)| (v.clone(), b.clone()))
                .collect(),
        }
    }

    /// Linearity segments as `(left, right, slope_exponent)` with slope
    /// `2^slope_exponent`.
    pub fn segments(&self) -> impl Iterator<Item = (&Dyadic, &Dyadic, i64)> {
        self.pairs.windows(2).map(|w| {
            let dv = &w[1].1 - &w[0].1;
            let db = &w[1].0 - &w[0].0;
            let k = dv
                .pow2_ratio(&db)
                .expect("canonical homeo has power-of-2 slopes");
            (&w[0].0, &w[1].0, k)
        })
    }

    /// Slope exponent (`slope = 2^k`) of the linearity segment whose
    /// interior contains `t`; `None` when `t` is a breakpoint or outside
    /// (0,1).
    pub fn slope_exp_at(&self, t: &Dyadic) -> Option<i64> {
        self.segments()
            .find(|&(l, r, _)| l < t && t < r)
            .map(|(_, _, k)| k)
    }

    /// Splits an element fixing 1/2 into its two halves under the
    /// isomorphism Stab(1/2) -> F x F: the left half is t -> 2 f(t/2), the
    /// right half is t -> 2 f((t+1)/2) - 1.
    pub fn stab_split(&self) -> Result<(PLHomeo, PLHomeo), HomeoError> {
        let half = Dyadic::half();
        let at_half = self.evaluate(&half)?;
        if at_half != half {
            return Err(HomeoError::NotAStabilizer(at_half.to_string()));
        }
        let one = Dyadic::one();
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut ts: BTreeSet<Dyadic> = self.pairs.iter().map(|p| p.0.clone()).collect();
        ts.insert(half.clone());
        for t in ts {
            let v = eval_pairs(&self.pairs, &t);
            if t <= half {
                left.push((t.mul_pow2(1), v.mul_pow2(1)));
            }
            if t >= half {
                right.push((&t.mul_pow2(1) - &one, &v.mul_pow2(1) - &one));
            }
        }
        Ok((PLHomeo::from_valid(left), PLHomeo::from_valid(right)))
    }

    /// Inverse of [`PLHomeo::stab_split`]: glues two elements into one that
    /// fixes 1/2, acting as the rescaled `left` on [0,1/2] and the rescaled
    /// `right` on [1/2,1].
    pub fn stab_join(left: &PLHomeo, right: &PLHomeo) -> PLHomeo {
        let one = Dyadic::one();
        let mut pairs: Vec<(Dyadic, Dyadic)> = left
            .pairs
            .iter()
            .map(|(b, v)| (b.mul_pow2(-1), v.mul_pow2(-1)))
            .collect();
        // left ends at (1/2, 1/2); right starts there.
        for (b, v) in right.pairs.iter().skip(1) {
            pairs.push(((b + &one).mul_pow2(-1), (v + &one).mul_pow2(-1)));
        }
        PLHomeo::from_valid(pairs)
    }
}

fn eval_pairs(pairs: &[(Dyadic, Dyadic)], t: &Dyadic) -> Dyadic {
    let i = pairs.partition_point(|(b, _)| b <= t);
    if i == 0 {
        // t below the first breakpoint can only be t = 0 for valid data.
        return pairs[0].1.clone();
    }
    let (b0, v0) = &pairs[i - 1];
    if b0 == t {
        return v0.clone();
    }
    let (b1, v1) = &pairs[i];
    let k = (v1 - v0).pow2_ratio(&(b1 - b0)).expect("power-of-2 slope");
    v0 + &(t - b0).mul_pow2(k)
}

fn eval_pairs_swapped(pairs: &[(Dyadic, Dyadic)], v: &Dyadic) -> Dyadic {
    let i = pairs.partition_point(|(_, w)| w <= v);
    if i == 0 {
        return pairs[0].0.clone();
    }
    let (b0, v0) = &pairs[i - 1];
    if v0 == v {
        return b0.clone();
    }
    let (b1, v1) = &pairs[i];
    let k = (b1 - b0).pow2_ratio(&(v1 - v0)).expect("power-of-2 slope");
    b0 + &(v - v0).mul_pow2(k)
}

/// Drops interior breakpoints where the two adjacent segments share a slope.
fn canonicalize(pairs: Vec<(Dyadic, Dyadic)>) -> Vec<(Dyadic, Dyadic)> {
    let mut out: Vec<(Dyadic, Dyadic)> = Vec::with_capacity(pairs.len());
    for p in pairs {
        while out.len() >= 2 {
            let a = &out[out.len() - 2];
            let b = &out[out.len() - 1];
            // collinear iff (vb-va)(tp-tb) == (vp-vb)(tb-ta)
            let lhs = &(&b.1 - &a.1) * &(&p.0 - &b.0);
            let rhs = &(&p.1 - &b.1) * &(&b.0 - &a.0);
            if lhs == rhs {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

fn x0_table() -> PLHomeo {
    let d = |n: i64, e: u32| Dyadic::new(n, e);
    PLHomeo {
        pairs: vec![
            (d(0, 0), d(0, 0)),
            (d(1, 1), d(1, 2)),
            (d(3, 2), d(1, 1)),
            (d(1, 0), d(1, 0)),
        ],
    }
}

fn x1_table() -> PLHomeo {
    let d = |n: i64, e: u32| Dyadic::new(n, e);
    PLHomeo {
        pairs: vec![
            (d(0, 0), d(0, 0)),
            (d(1, 1), d(1, 1)),
            (d(3, 2), d(5, 3)),
            (d(7, 3), d(3, 2)),
            (d(1, 0), d(1, 0)),
        ],
    }
}

impl fmt::Display for PLHomeo {
    /// Renders the breakpoint list, e.g.
    /// `[(0, 0), (1/2, 1/4), (3/4, 1/2), (1, 1)]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (b, v)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({b}, {v})")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PLHomeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: i64, e: u32) -> Dyadic {
        Dyadic::new(n, e)
    }

    #[test]
    fn generator_tables() {
        let x0 = PLHomeo::generator(0);
        assert_eq!(x0.evaluate(&d(1, 1)).unwrap(), d(1, 2)); // x0(1/2) = 1/4
        let x1 = PLHomeo::generator(1);
        assert_eq!(x1.evaluate(&d(3, 2)).unwrap(), d(5, 3)); // x1(3/4) = 5/8
        assert_eq!(x1.evaluate(&d(1, 1)).unwrap(), d(1, 1)); // x1(1/2) = 1/2
        assert_eq!(x1.evaluate(&d(7, 3)).unwrap(), d(3, 2)); // x1(7/8) = 3/4
    }

    #[test]
    fn generator_support() {
        // x_n is the identity on [0, 1 - 2^-n]; checked by evaluating at a
        // mesh of points rather than by trusting composition.
        for n in 2..=6u32 {
            let xn = PLHomeo::generator(n);
            let edge = &Dyadic::one() - &Dyadic::new(1, n);
            for k in 0..=64i64 {
                let t = &d(k, 6) * &edge; // k/64 * (1 - 2^-n)
                assert_eq!(xn.evaluate(&t).unwrap(), t, "x_{n} must fix {t}");
            }
            assert_ne!(xn, PLHomeo::identity());
        }
    }

    #[test]
    fn compose_and_invert() {
        let x0 = PLHomeo::generator(0);
        let id = PLHomeo::identity();
        assert_eq!(x0.compose(&id), x0);
        assert_eq!(id.compose(&x0), x0);
        assert_eq!(x0.compose(&x0.invert()), id);
        assert_eq!(x0.invert().evaluate(&d(1, 1)).unwrap(), d(3, 2)); // x0^-1(1/2) = 3/4
        assert_eq!(x0.invert().invert(), x0);
        // basic relation x_0 x_2 = x_3 x_0
        let lhs = PLHomeo::generator(0).compose(&PLHomeo::generator(2));
        let rhs = PLHomeo::generator(3).compose(&PLHomeo::generator(0));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_convention() {
        // (fg)(x) = g(f(x))
        let f = PLHomeo::generator(0);
        let g = PLHomeo::generator(1);
        let fg = f.compose(&g);
        for k in 1..16i64 {
            let t = d(k, 4);
            assert_eq!(
                fg.evaluate(&t).unwrap(),
                g.evaluate(&f.evaluate(&t).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn membership_validation() {
        assert!(PLHomeo::validate_membership(&[
            (d(0, 0), d(0, 0)),
            (d(1, 0), d(1, 0)),
        ]));
        // slope 3 segment
        assert!(!PLHomeo::validate_membership(&[
            (d(0, 0), d(0, 0)),
            (d(1, 2), d(3, 2)),
            (d(1, 0), d(1, 0)),
        ]));
        // does not fix the endpoints
        assert!(!PLHomeo::validate_membership(&[
            (d(0, 0), d(1, 2)),
            (d(1, 0), d(1, 0)),
        ]));
        // decreasing
        assert!(!PLHomeo::validate_membership(&[
            (d(0, 0), d(0, 0)),
            (d(1, 1), d(3, 2)),
            (d(3, 2), d(1, 2)),
            (d(1, 0), d(1, 0)),
        ]));
    }

    #[test]
    fn redundant_breakpoints_are_dropped() {
        let f = PLHomeo::try_new(vec![
            (d(0, 0), d(0, 0)),
            (d(1, 1), d(1, 1)),
            (d(1, 0), d(1, 0)),
        ])
        .unwrap();
        assert_eq!(f, PLHomeo::identity());
    }

    #[test]
    fn stab_split_examples() {
        let id = PLHomeo::identity();
        assert_eq!(id.stab_split().unwrap(), (id.clone(), id.clone()));
        // x_1 fixes 1/2; its halves are (identity, x_0)
        let x1 = PLHomeo::generator(1);
        let (l, r) = x1.stab_split().unwrap();
        assert_eq!(l, PLHomeo::identity());
        assert_eq!(r, PLHomeo::generator(0));
        // generator(n+1) splits as (identity, generator(n))
        for n in 0..=4u32 {
            let (l, r) = PLHomeo::generator(n + 1).stab_split().unwrap();
            assert_eq!(l, PLHomeo::identity());
            assert_eq!(r, PLHomeo::generator(n));
        }
        // x_0 does not stabilize 1/2
        assert!(PLHomeo::generator(0).stab_split().is_err());
    }

    #[test]
    fn stab_join_examples() {
        let id = PLHomeo::identity();
        assert_eq!(PLHomeo::stab_join(&id, &id), id);
        assert_eq!(
            PLHomeo::stab_join(&id, &PLHomeo::generator(0)),
            PLHomeo::generator(1)
        );
    }

    #[test]
    fn display_format() {
        assert_eq!(
            PLHomeo::generator(0).to_string(),
            "[(0, 0), (1/2, 1/4), (3/4, 1/2), (1, 1)]"
        );
    }
}
