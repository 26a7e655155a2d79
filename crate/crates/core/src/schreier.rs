//! The Schreier graph of the action on dyadic rationals in (0,1), its
//! structural verifier, the tuple-orbit generalization, Folner ratios,
//! transporters, the maximal-subgroup decomposition, and the word-length
//! lower bound.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::dyadic::Dyadic;
use crate::error::{GraphError, HomeoError, ParseError};
use crate::exec;
use crate::graph::{build_orbit_graph, LabeledGraph, Truncation};
use crate::plhomeo::PLHomeo;
use crate::report::Report;
use crate::word::{Letter, Word};

/// The four moves `x_0^{+-1}, x_1^{+-1}` as exact maps on dyadic points.
fn standard_action() -> impl Fn(u32, bool, &Dyadic) -> Dyadic + Send + Sync {
    let gens = [PLHomeo::generator(0), PLHomeo::generator(1)];
    let invs = [gens[0].invert(), gens[1].invert()];
    move |g, inverse, p| {
        let h = if inverse {
            &invs[g as usize]
        } else {
            &gens[g as usize]
        };
        h.evaluate(p).expect("orbit points stay in [0,1]")
    }
}

/// Breadth-first truncation of the Schreier graph of the action on the
/// dyadic rationals of (0,1), seeded anywhere in the orbit.
pub fn dyadic_orbit_graph(seed: &Dyadic, limit: Truncation) -> LabeledGraph<Dyadic> {
    build_orbit_graph(seed.clone(), &[0, 1], standard_action(), limit)
}

/// A strictly increasing tuple of dyadic rationals in (0,1): one coset of
/// the pointwise stabilizer of its entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DyadicTuple {
    entries: Vec<Dyadic>,
}

impl DyadicTuple {
    pub fn new(entries: Vec<Dyadic>) -> Result<Self, ParseError> {
        let ok = !entries.is_empty()
            && entries.windows(2).all(|w| w[0] < w[1])
            && entries
                .iter()
                .all(|e| e > &Dyadic::zero() && e < &Dyadic::one());
        if ok {
            Ok(DyadicTuple { entries })
        } else {
            Err(ParseError::Tuple(format!("{entries:?}")))
        }
    }

    pub fn entries(&self) -> &[Dyadic] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Componentwise image; increasing maps preserve the strict order.
    pub fn apply(&self, h: &PLHomeo) -> DyadicTuple {
        DyadicTuple {
            entries: self
                .entries
                .iter()
                .map(|e| h.evaluate(e).expect("entries stay in (0,1)"))
                .collect(),
        }
    }
}

impl fmt::Display for DyadicTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for DyadicTuple {
    type Err = ParseError;

    /// Accepts `1/4,1/2` or `(1/4,1/2)`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s.trim());
        let entries = body
            .split(',')
            .map(|p| p.parse::<Dyadic>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ParseError::Tuple(s.to_string()))?;
        DyadicTuple::new(entries)
    }
}

/// Orbit graph of the componentwise action on increasing tuples.
pub fn tuple_orbit_graph(seed: &DyadicTuple, limit: Truncation) -> LabeledGraph<DyadicTuple> {
    let gens = [PLHomeo::generator(0), PLHomeo::generator(1)];
    let invs = [gens[0].invert(), gens[1].invert()];
    build_orbit_graph(
        seed.clone(),
        &[0, 1],
        move |g, inverse, t: &DyadicTuple| {
            let h = if inverse {
                &invs[g as usize]
            } else {
                &gens[g as usize]
            };
            t.apply(h)
        },
        limit,
    )
}

/// The odd-numerator level sets of the structure proof: `level_set(n, lo,
/// hi)` is `{ k/2^n : k odd } ∩ (lo, hi)`.
fn level_set(n: u32, lo: &Dyadic, hi: &Dyadic) -> BTreeSet<Dyadic> {
    let mut out = BTreeSet::new();
    let mut k = BigInt::from(1);
    loop {
        let d = Dyadic::new(k.clone(), n);
        if &d >= hi {
            break;
        }
        if &d > lo {
            out.insert(d);
        }
        k += 2;
    }
    out
}

fn set_a(n: u32) -> BTreeSet<Dyadic> {
    level_set(n, &Dyadic::new(1, 1), &Dyadic::new(3, 2))
}

fn set_b(n: u32) -> BTreeSet<Dyadic> {
    level_set(n, &Dyadic::new(3, 2), &Dyadic::new(7, 3))
}

fn set_c(n: u32) -> BTreeSet<Dyadic> {
    level_set(n, &Dyadic::new(1, 1), &Dyadic::new(5, 3))
}

fn set_d(n: u32) -> BTreeSet<Dyadic> {
    level_set(n, &Dyadic::new(5, 3), &Dyadic::new(3, 2))
}

fn apply_set(h: &PLHomeo, s: &BTreeSet<Dyadic>) -> BTreeSet<Dyadic> {
    s.iter().map(|d| h.evaluate(d).expect("in range")).collect()
}

fn affine_set(
    s: &BTreeSet<Dyadic>,
    scale_exp: i64,
    pre_shift: &Dyadic,
    post_shift: &Dyadic,
) -> BTreeSet<Dyadic> {
    // { 2^scale_exp * (x + pre_shift) + post_shift : x in s }
    s.iter()
        .map(|x| &(x + pre_shift).mul_pow2(scale_exp) + post_shift)
        .collect()
}

fn fmt_set(s: &BTreeSet<Dyadic>) -> String {
    let parts: Vec<String> = s.iter().map(|d| d.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Verifies, for `3 <= n <= n_max`, the set identities of the structure
/// proof of the dyadic Schreier graph, plus the two ray formulas.
///
/// Every identity is decided by exact arithmetic on the defining sets
/// (odd numerators at a fixed level inside an interval). The truncation `g`
/// fixes the scope: its explored region has a maximal denominator exponent,
/// identities are only asserted while they stay within that resolution, and
/// a requested `n` beyond it is reported as a failure rather than skipped.
/// Ray formulas run as deep as the budget allows and must fit at least one
/// step.
pub fn verify_dyadic_structure(g: &LabeledGraph<Dyadic>, n_max: u32) -> Report {
    let mut report = Report::new("verify-dyadic-structure");
    let scope_exp = g
        .vertex_ids()
        .filter(|&v| !g.is_frontier(v))
        .map(|v| g.vertex(v).exponent())
        .max()
        .unwrap_or(0);
    let x0 = PLHomeo::generator(0);
    let x1 = PLHomeo::generator(1);
    let x0_inv = x0.invert();
    let x1_inv = x1.invert();
    let quarter = Dyadic::new(1, 2);
    let one = Dyadic::one();

    for n in 3..=n_max {
        if n + 1 > scope_exp {
            report.fail(
                format!("level {n}"),
                format!(
                    "truncation resolves denominators up to 2^{scope_exp}, too shallow for A_{n}"
                ),
            );
            continue;
        }
        let a_n = set_a(n);
        let checks: Vec<(String, BTreeSet<Dyadic>, BTreeSet<Dyadic>)> = {
            let mut v = Vec::new();
            v.push((
                format!("x0^-1(A_{n}) == B_{}", n + 1),
                apply_set(&x0_inv, &a_n),
                set_b(n + 1),
            ));
            if n >= 4 {
                v.push((
                    format!("x1(B_{n}) == D_{n}"),
                    apply_set(&x1, &set_b(n)),
                    set_d(n),
                ));
            }
            v.push((
                format!("x1(A_{n}) == C_{}", n + 1),
                apply_set(&x1, &a_n),
                set_c(n + 1),
            ));
            v.push((
                format!("(x0^-1 x1)(A_{n}) == D_{}", n + 1),
                apply_set(&x1, &apply_set(&x0_inv, &a_n)),
                set_d(n + 1),
            ));
            v.push((
                format!("x1(A_{n}) ∪ (x0^-1 x1)(A_{n}) == A_{}", n + 1),
                {
                    let mut u = apply_set(&x1, &a_n);
                    u.extend(apply_set(&x1, &apply_set(&x0_inv, &a_n)));
                    u
                },
                set_a(n + 1),
            ));
            v
        };
        for (label, lhs, rhs) in checks {
            if lhs == rhs {
                report.pass(label, "");
            } else {
                report.fail(
                    label,
                    format!("lhs {} != rhs {}", fmt_set(&lhs), fmt_set(&rhs)),
                );
            }
        }

        // Ray formula: x_0^k(A_n) = 2^(1-k) (A_n - 1/4); the image set lives
        // at exponent n+k-1, which bounds k inside the truncation budget.
        let mut cur = a_n.clone();
        let mut ray_ok = true;
        let k_max = (scope_exp + 1).saturating_sub(n) as i64;
        for k in 1..=k_max {
            cur = apply_set(&x0, &cur);
            let expect = affine_set(&a_n, 1 - k, &(-&quarter), &Dyadic::zero());
            if cur != expect {
                report.fail(
                    format!("x0^{k}(A_{n}) == 2^(1-{k})(A_{n} - 1/4)"),
                    format!("lhs {} != rhs {}", fmt_set(&cur), fmt_set(&expect)),
                );
                ray_ok = false;
                break;
            }
        }
        if ray_ok {
            report.push(
                format!("x0^k(A_{n}) ray"),
                k_max >= 1,
                format!("verified for k = 1..={k_max}"),
            );
        }

        // Ray formula: f(B_n) = 1 - 2^-k (1 - B_n) for every length-k word f
        // over {x0^-1, x1^-1}; images live at exponent n+k.
        if n >= 4 {
            let b_n = set_b(n);
            let mut ray_ok = true;
            let k_max = scope_exp.saturating_sub(n) as usize;
            'outer: for k in 1..=k_max {
                let expect = affine_set(&b_n, -(k as i64), &(-&one), &one);
                // all 2^k words in the two inverse letters
                for bits in 0u64..(1 << k) {
                    let mut img = b_n.clone();
                    for j in 0..k {
                        let h = if (bits >> j) & 1 == 0 {
                            &x0_inv
                        } else {
                            &x1_inv
                        };
                        img = apply_set(h, &img);
                    }
                    if img != expect {
                        report.fail(
                            format!("f(B_{n}) == 1 - 2^-{k}(1 - B_{n})"),
                            format!(
                                "word mask {bits:#b}: lhs {} != rhs {}",
                                fmt_set(&img),
                                fmt_set(&expect)
                            ),
                        );
                        ray_ok = false;
                        break 'outer;
                    }
                }
            }
            if ray_ok {
                report.push(
                    format!("f(B_{n}) ray over the inverse monoid"),
                    k_max >= 1,
                    format!("verified for k = 1..={k_max}, all 2^k words each"),
                );
            }
        }
    }
    report
}

/// The Folner tuple `E_i = (1/2^(i+n), ..., 1/2^(i+1))` with `n` entries.
pub fn folner_tuple(i: u64, n: usize) -> DyadicTuple {
    let entries = (0..n)
        .map(|j| {
            let e = i + (n - j) as u64;
            Dyadic::new(1, u32::try_from(e).expect("exponent fits"))
        })
        .collect();
    DyadicTuple::new(entries).expect("strictly increasing by construction")
}

/// `|∂S_m| / |S_m|` for the Folner family `S_m = {E_1, ..., E_m}` in the
/// n-tuple orbit graph, with the boundary found by enumerating the actual
/// neighbors of every member (not by formula).
pub fn folner_ratio(m: u64, n: usize) -> BigRational {
    assert!(m >= 1 && n >= 1, "m and n must be positive");
    let gens = [PLHomeo::generator(0), PLHomeo::generator(1)];
    let invs = [gens[0].invert(), gens[1].invert()];
    let members: Vec<DyadicTuple> = (1..=m).map(|i| folner_tuple(i, n)).collect();
    let inside: BTreeSet<DyadicTuple> = members.iter().cloned().collect();
    let neighbor_sets = exec::map_collect(&members, |t| {
        let mut out = Vec::with_capacity(4);
        for h in gens.iter().chain(invs.iter()) {
            let img = t.apply(h);
            if !inside.contains(&img) {
                out.push(img);
            }
        }
        out
    });
    let boundary: BTreeSet<DyadicTuple> = neighbor_sets.into_iter().flatten().collect();
    BigRational::new(BigInt::from(boundary.len()), BigInt::from(m))
}

/// A geodesic word transporting `a` to `b` in the Schreier graph: breadth
/// first search through the action itself, so no truncation is involved.
/// The returned word `w` satisfies `w(a) = b` under the composition
/// convention (first letter acts first); the orientation is fixed by an
/// evaluation check, never by assumption.
pub fn find_transporter(a: &Dyadic, b: &Dyadic) -> Word {
    assert!(
        a > &Dyadic::zero() && a < &Dyadic::one() && b > &Dyadic::zero() && b < &Dyadic::one(),
        "transporter endpoints must lie in (0,1)"
    );
    let act = standard_action();
    let moves = [
        Letter::gen(0),
        Letter::gen(1),
        Letter::inv(0),
        Letter::inv(1),
    ];
    let mut parent: HashMap<Dyadic, (Dyadic, Letter)> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(a.clone());
    let mut seen: BTreeSet<Dyadic> = [a.clone()].into();
    'search: while let Some(v) = queue.pop_front() {
        if &v == b {
            break;
        }
        for l in moves {
            let w = act(l.index, l.inverse, &v);
            if seen.insert(w.clone()) {
                parent.insert(w.clone(), (v.clone(), l));
                if &w == b {
                    break 'search;
                }
                queue.push_back(w);
            }
        }
    }
    let mut letters = Vec::new();
    let mut cur = b.clone();
    while &cur != a {
        let (prev, l) = parent
            .get(&cur)
            .expect("transitive action reaches b")
            .clone();
        letters.push(l);
        cur = prev;
    }
    letters.reverse();
    let word = Word::from_letters(letters);
    debug_assert_eq!(&word.to_plhomeo().evaluate(a).unwrap(), b);
    word
}

/// An element of the stabilizer of 1/2 carrying `u` to `v`, for `u, v` both
/// in (0,1/2) or both in (1/2,1): rescale to the full interval, transport
/// there, and glue back through the stabilizer splitting.
pub fn stab_transporter(u: &Dyadic, v: &Dyadic) -> Result<PLHomeo, GraphError> {
    let half = Dyadic::half();
    let id = PLHomeo::identity();
    let h = if u < &half && v < &half {
        let w = find_transporter(&u.mul_pow2(1), &v.mul_pow2(1));
        PLHomeo::stab_join(&w.to_plhomeo(), &id)
    } else if u > &half && v > &half {
        let one = Dyadic::one();
        let w = find_transporter(&(&u.mul_pow2(1) - &one), &(&v.mul_pow2(1) - &one));
        PLHomeo::stab_join(&id, &w.to_plhomeo())
    } else {
        return Err(GraphError::SplitSides(u.to_string(), v.to_string()));
    };
    debug_assert_eq!(&h.evaluate(u).unwrap(), v);
    Ok(h)
}

/// Factorization `g = stabilizer * mover` witnessing that the stabilizer of
/// 1/2 together with any single element moving 1/2 generates the group.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub stabilizer: PLHomeo,
    pub mover: PLHomeo,
}

/// Decomposes an arbitrary `g` over `<Stab(1/2), f>` for any `f` moving 1/2:
/// returns `(h~, f~)` with `g = h~ f~`, `h~` stabilizing 1/2, and `f~` of
/// the shape `f h` or `f^-1 h` with `h` in the stabilizer. When `g` itself
/// stabilizes 1/2 the decomposition is `(g, identity)`.
pub fn maximality_decompose(f: &PLHomeo, g: &PLHomeo) -> Result<Decomposition, HomeoError> {
    let half = Dyadic::half();
    let u = f.evaluate(&half)?;
    if u == half {
        return Err(HomeoError::NotAStabilizer(
            "f must move 1/2 but fixes it".into(),
        ));
    }
    let v = g.evaluate(&half)?;
    if v == half {
        let dec = Decomposition {
            stabilizer: g.clone(),
            mover: PLHomeo::identity(),
        };
        debug_assert_eq!(dec.stabilizer.compose(&dec.mover), *g);
        return Ok(dec);
    }
    // Pick f or f^-1 so that its image of 1/2 lands on the same side as v,
    // then steer it onto v inside the stabilizer.
    let f_inv = f.invert();
    let u_inv = f_inv.evaluate(&half)?;
    let (base, base_at_half) = if (v < half) == (u < half) {
        (f.clone(), u)
    } else {
        (f_inv, u_inv)
    };
    let h = stab_transporter(&base_at_half, &v).expect("same side of 1/2");
    let mover = base.compose(&h);
    debug_assert_eq!(mover.evaluate(&half).unwrap(), v);
    let stabilizer = g.compose(&mover.invert());
    debug_assert_eq!(stabilizer.evaluate(&half).unwrap(), half);
    debug_assert_eq!(stabilizer.compose(&mover), *g);
    Ok(Decomposition { stabilizer, mover })
}

/// Lower bound on the word length of `f` in `{x_0^{+-1}, x_1^{+-1}}`: the
/// largest Schreier-graph distance between a breakpoint `a` of `f` and its
/// image `f(a)`. The truncation `g` must contain every such point; the
/// distances themselves are measured through the action (a truncated graph
/// could only overstate them).
pub fn word_length_lower_bound(f: &PLHomeo, g: &LabeledGraph<Dyadic>) -> Result<u32, GraphError> {
    let mut best = 0u32;
    for (a, fa) in f.breakpoints() {
        if a.is_zero() || a == &Dyadic::one() {
            continue;
        }
        for p in [a, fa] {
            if !g.contains(p) {
                return Err(GraphError::MissingVertex(p.to_string()));
            }
        }
        best = best.max(action_distance(a, fa));
    }
    Ok(best)
}

/// Exact combinatorial distance in the (infinite) dyadic Schreier graph,
/// computed by bidirectionless BFS over the action.
fn action_distance(a: &Dyadic, b: &Dyadic) -> u32 {
    if a == b {
        return 0;
    }
    let act = standard_action();
    let mut dist: HashMap<Dyadic, u32> = [(a.clone(), 0)].into();
    let mut queue = VecDeque::new();
    queue.push_back(a.clone());
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for (g, inv) in [(0, false), (1, false), (0, true), (1, true)] {
            let w = act(g, inv, &v);
            if w == *b {
                return d + 1;
            }
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    unreachable!("the action is transitive on dyadics in (0,1)")
}
