//! Graph-level amenability diagnostics: vertex boundaries, Cheeger ratios,
//! the doubling-condition witness checker, and the sampled boundary
//! inequality relating the positive-monoid graph to the full Cayley graph.
//!
//! Frontier discipline: every computation here refuses to touch a frontier
//! vertex and errors out instead of silently returning a truncation-biased
//! answer.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::GraphError;
use crate::exec;
use crate::forest::BinaryForest;
use crate::graph::{LabeledGraph, VertexKey};
use crate::plhomeo::PLHomeo;
use crate::report::Report;
use crate::word::positive_words_up_to;

/// The vertex boundary: all vertices outside `s` with a neighbor in `s`
/// (either edge direction, loops ignored). Errors if `s` or any of its
/// neighbors touches the frontier.
pub fn boundary<V: VertexKey>(
    g: &LabeledGraph<V>,
    s: &BTreeSet<usize>,
) -> Result<BTreeSet<usize>, GraphError> {
    let mut out = BTreeSet::new();
    for &v in s {
        if g.is_frontier(v) {
            return Err(GraphError::FrontierContamination(g.vertex(v).to_string()));
        }
        for w in g.neighbors(v) {
            if g.is_frontier(w) {
                return Err(GraphError::FrontierContamination(g.vertex(w).to_string()));
            }
            if !s.contains(&w) {
                out.insert(w);
            }
        }
    }
    Ok(out)
}

/// `|boundary(s)| / |s|` as an exact rational.
pub fn cheeger_ratio<V: VertexKey>(
    g: &LabeledGraph<V>,
    s: &BTreeSet<usize>,
) -> Result<BigRational, GraphError> {
    if s.is_empty() {
        return Err(GraphError::EmptySet);
    }
    let b = boundary(g, s)?;
    Ok(BigRational::new(
        BigInt::from(b.len()),
        BigInt::from(s.len()),
    ))
}

/// Verifies a doubling-condition witness: two injective maps with disjoint
/// images, both moving no vertex farther than `k`; as a corollary,
/// `|N_k(S)| >= 2|S|` is demonstrated on seeded random subsets of the
/// region.
///
/// Errors with `FrontierContamination` if any vertex within distance `k-1`
/// of the region is frontier (its missing edges would corrupt the distance
/// and neighborhood computations).
pub fn doubling_check<V: VertexKey>(
    g: &LabeledGraph<V>,
    k: u32,
    f_img: &BTreeMap<usize, usize>,
    g_img: &BTreeMap<usize, usize>,
    region: &BTreeSet<usize>,
    samples: usize,
    seed: u64,
) -> Result<Report, GraphError> {
    if region.is_empty() {
        return Err(GraphError::EmptySet);
    }
    // Frontier discipline over the k-balls.
    let mut layer = region.clone();
    let mut seen = region.clone();
    for _ in 0..k {
        for &v in &layer {
            if g.is_frontier(v) {
                return Err(GraphError::FrontierContamination(g.vertex(v).to_string()));
            }
        }
        let mut next = BTreeSet::new();
        for &v in &layer {
            for w in g.neighbors(v) {
                if seen.insert(w) {
                    next.insert(w);
                }
            }
        }
        layer = next;
    }

    let mut report = Report::new("doubling-check");
    let region_vec: Vec<usize> = region.iter().copied().collect();

    for (name, map) in [("f", f_img), ("g", g_img)] {
        let missing = region_vec.iter().filter(|v| !map.contains_key(v)).count();
        report.push(
            format!("{name} is defined on the region"),
            missing == 0,
            if missing == 0 {
                format!("{} vertices", region_vec.len())
            } else {
                format!("{missing} region vertices lack an image")
            },
        );
        let mut images: BTreeMap<usize, usize> = BTreeMap::new();
        let mut collisions = Vec::new();
        for &v in &region_vec {
            if let Some(&w) = map.get(&v) {
                if let Some(&prev) = images.get(&w) {
                    collisions.push(format!(
                        "{} and {} both map to {}",
                        g.vertex(prev),
                        g.vertex(v),
                        g.vertex(w)
                    ));
                }
                images.insert(w, v);
            }
        }
        report.push(
            format!("{name} is injective"),
            collisions.is_empty(),
            collisions.join("; "),
        );
    }

    let f_images: BTreeSet<usize> = region_vec
        .iter()
        .filter_map(|v| f_img.get(v))
        .copied()
        .collect();
    let g_images: BTreeSet<usize> = region_vec
        .iter()
        .filter_map(|v| g_img.get(v))
        .copied()
        .collect();
    let overlap: Vec<String> = f_images
        .intersection(&g_images)
        .map(|w| g.vertex(*w).to_string())
        .collect();
    report.push(
        "images of f and g are disjoint",
        overlap.is_empty(),
        if overlap.is_empty() {
            format!("{} + {} image vertices", f_images.len(), g_images.len())
        } else {
            format!("shared images: {}", overlap.join(", "))
        },
    );

    // Displacements, each within its own k-ball.
    let displaced: Vec<Option<String>> = exec::map_collect(&region_vec, |&v| {
        let ball = g.ball(&[v].into_iter().collect(), k);
        for map in [f_img, g_img] {
            match map.get(&v) {
                Some(w) if ball.contains(w) => {}
                Some(w) => return Some(format!("d({}, {}) > {k}", g.vertex(v), g.vertex(*w))),
                None => return None, // reported as missing above
            }
        }
        None
    });
    let bad: Vec<String> = displaced.into_iter().flatten().collect();
    report.push(
        format!("both maps move vertices at most {k}"),
        bad.is_empty(),
        bad.join("; "),
    );

    // Sampled doubling inequality.
    let sample_results: Vec<Option<String>> = exec::map_range(samples, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let size = usize::try_from(rand::Rng::random_range(
            &mut rng,
            1..=region_vec.len() as u64,
        ))
        .unwrap();
        let subset: BTreeSet<usize> = rand::seq::index::sample(&mut rng, region_vec.len(), size)
            .into_iter()
            .map(|ix| region_vec[ix])
            .collect();
        let grown = g.ball(&subset, k);
        if grown.len() >= 2 * subset.len() {
            None
        } else {
            Some(format!(
                "sample {i}: |N_{k}(S)| = {} < 2|S| = {}",
                grown.len(),
                2 * subset.len()
            ))
        }
    });
    let failures: Vec<String> = sample_results.into_iter().flatten().collect();
    report.push(
        format!("|N_{k}(S)| >= 2|S| on {samples} seeded random subsets"),
        failures.is_empty(),
        if failures.is_empty() {
            format!("seed {seed}")
        } else {
            failures.join("; ")
        },
    );
    Ok(report)
}

/// An element of the positive monoid carried in both canonical forms.
#[derive(Clone, Debug)]
struct PElement {
    forest: BinaryForest,
    homeo: PLHomeo,
}

impl PElement {
    fn identity() -> Self {
        PElement {
            forest: BinaryForest::trivial(),
            homeo: PLHomeo::identity(),
        }
    }

    /// Neighbors inside the positive-monoid graph: the two positive
    /// translates always, the inverse translates when they stay positive.
    fn p_neighbors(&self, gens: &[PLHomeo; 2], invs: &[PLHomeo; 2]) -> Vec<PElement> {
        let mut out = Vec::with_capacity(4);
        for i in 0..2usize {
            out.push(PElement {
                forest: self.forest.add_caret(i),
                homeo: self.homeo.compose(&gens[i]),
            });
            if let Some(f) = self.forest.detach_caret(i) {
                out.push(PElement {
                    forest: f,
                    homeo: self.homeo.compose(&invs[i]),
                });
            }
        }
        out
    }
}

fn boundary_sizes(t_set: &[PElement], gens: &[PLHomeo; 2], invs: &[PLHomeo; 2]) -> (usize, usize) {
    let t_forests: BTreeSet<&BinaryForest> = t_set.iter().map(|e| &e.forest).collect();
    let t_homeos: BTreeSet<&PLHomeo> = t_set.iter().map(|e| &e.homeo).collect();
    let mut p_boundary: BTreeSet<BinaryForest> = BTreeSet::new();
    let mut f_boundary: BTreeSet<PLHomeo> = BTreeSet::new();
    for e in t_set {
        for nb in e.p_neighbors(gens, invs) {
            if !t_forests.contains(&nb.forest) {
                p_boundary.insert(nb.forest);
            }
        }
        for h in gens.iter().chain(invs.iter()) {
            let img = e.homeo.compose(h);
            if !t_homeos.contains(&img) {
                f_boundary.insert(img);
            }
        }
    }
    (p_boundary.len(), f_boundary.len())
}

/// Samples finite subsets `T` of the positive monoid and checks the
/// boundary inequality `|∂_F T| <= 4 |∂_P T|`: the positive-monoid boundary
/// is computed on canonical forests, the Cayley-graph boundary on canonical
/// homeomorphisms. Two deterministic cases (the singleton identity and the
/// radius-2 ball) are always included.
pub fn gamma_p_boundary_test(samples: usize, max_word_len: usize, seed: u64) -> Report {
    let gens = [PLHomeo::generator(0), PLHomeo::generator(1)];
    let invs = [gens[0].invert(), gens[1].invert()];
    let mut report = Report::new("gamma-p-boundary-test");

    let check = |report: &mut Report, label: String, t_set: &[PElement]| {
        let (p, f) = boundary_sizes(t_set, &gens, &invs);
        report.push(
            label,
            f <= 4 * p,
            format!(
                "|T| = {}, |boundary_P| = {p}, |boundary_F| = {f}",
                t_set.len()
            ),
        );
    };

    // T = {identity}
    check(
        &mut report,
        "T = {identity}".into(),
        &[PElement::identity()],
    );

    // T = ball of radius 2 in the positive-monoid graph
    let mut ball: Vec<PElement> = vec![PElement::identity()];
    let mut ball_forests: BTreeSet<BinaryForest> = [BinaryForest::trivial()].into();
    let mut layer: Vec<PElement> = ball.clone();
    for _ in 0..2 {
        let mut next = Vec::new();
        for e in &layer {
            for nb in e.p_neighbors(&gens, &invs) {
                if ball_forests.insert(nb.forest.clone()) {
                    next.push(nb.clone());
                    ball.push(nb);
                }
            }
        }
        layer = next;
    }
    check(
        &mut report,
        "T = ball of radius 2 in the monoid graph".into(),
        &ball,
    );

    // Universe for sampling: all distinct elements of positive words over
    // {x0..x3} up to the length bound.
    let words = positive_words_up_to(&[0, 1, 2, 3], max_word_len);
    let elements = exec::map_collect(&words, |w| PElement {
        forest: crate::forest::word_to_forest(w).expect("positive word"),
        homeo: w.to_plhomeo(),
    });
    let mut universe: Vec<PElement> = Vec::new();
    let mut seen: BTreeSet<BinaryForest> = BTreeSet::new();
    for e in elements {
        if seen.insert(e.forest.clone()) {
            universe.push(e);
        }
    }

    let outcomes: Vec<(String, bool, String)> = exec::map_range(samples, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let max_size = universe.len().min(64) as u64;
        let size = usize::try_from(rand::Rng::random_range(&mut rng, 1..=max_size)).unwrap();
        let t_set: Vec<PElement> = rand::seq::index::sample(&mut rng, universe.len(), size)
            .into_iter()
            .map(|ix| universe[ix].clone())
            .collect();
        let (p, f) = boundary_sizes(&t_set, &gens, &invs);
        (
            format!("sample {i}"),
            f <= 4 * p,
            format!("|T| = {size}, |boundary_P| = {p}, |boundary_F| = {f}"),
        )
    });
    for (label, ok, detail) in outcomes {
        report.push(label, ok, detail);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;
    use crate::graph::Truncation;
    use crate::schreier::{dyadic_orbit_graph, folner_tuple, tuple_orbit_graph};

    fn d(n: i64, e: u32) -> Dyadic {
        Dyadic::new(n, e)
    }

    #[test]
    fn singleton_boundary_in_dyadic_graph() {
        let g = dyadic_orbit_graph(&d(1, 1), Truncation::Depth(4));
        let half = g.vertex_id(&d(1, 1)).unwrap();
        let b = boundary(&g, &[half].into()).unwrap();
        let keys: BTreeSet<Dyadic> = b.iter().map(|v| g.vertex(*v).clone()).collect();
        assert_eq!(keys, [d(1, 2), d(3, 2)].into());
        assert_eq!(
            cheeger_ratio(&g, &[half].into()).unwrap(),
            BigRational::new(2.into(), 1.into())
        );
    }

    #[test]
    fn boundary_respects_frontier_discipline() {
        let g = dyadic_orbit_graph(&d(1, 1), Truncation::Depth(2));
        // pick an explored vertex with a frontier neighbor
        let v = g
            .vertex_ids()
            .find(|&v| !g.is_frontier(v) && g.neighbors(v).iter().any(|&w| g.is_frontier(w)))
            .unwrap();
        assert!(matches!(
            boundary(&g, &[v].into()),
            Err(GraphError::FrontierContamination(_))
        ));
        assert!(matches!(
            cheeger_ratio(&g, &BTreeSet::new()),
            Err(GraphError::EmptySet)
        ));
    }

    #[test]
    fn whole_component_has_empty_boundary() {
        // hand-built finite triangle: taking everything leaves no boundary
        let mut g: LabeledGraph<u32> = LabeledGraph::new();
        for v in 0..3u32 {
            g.add_vertex(v);
        }
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            g.add_edge(a, crate::word::Letter::gen(0), b);
        }
        let everything: BTreeSet<usize> = (0..3).collect();
        assert!(boundary(&g, &everything).unwrap().is_empty());
        let b = boundary(&g, &[0].into()).unwrap();
        assert_eq!(b, [1, 2].into());
        assert!(b.is_disjoint(&[0usize].into_iter().collect()));
    }

    #[test]
    fn folner_boundary_in_truncated_tuple_graph() {
        // S_3 for 1-tuples inside a deep truncation: boundary {E_0, E_4}
        let g = tuple_orbit_graph(&folner_tuple(1, 1), Truncation::Depth(8));
        let s: BTreeSet<usize> = (1..=3)
            .map(|i| g.vertex_id(&folner_tuple(i, 1)).unwrap())
            .collect();
        let b = boundary(&g, &s).unwrap();
        let keys: BTreeSet<_> = b.iter().map(|v| g.vertex(*v).clone()).collect();
        assert_eq!(keys, [folner_tuple(0, 1), folner_tuple(4, 1)].into());
        assert_eq!(
            cheeger_ratio(&g, &s).unwrap(),
            BigRational::new(2.into(), 3.into())
        );
    }

    #[test]
    fn doubling_negative_control_identity_maps() {
        let g = dyadic_orbit_graph(&d(1, 1), Truncation::Depth(6));
        let region: BTreeSet<usize> = g
            .vertex_ids()
            .filter(|&v| {
                g.ball(&[v].into_iter().collect(), 2)
                    .iter()
                    .all(|&w| !g.is_frontier(w))
            })
            .collect();
        assert!(!region.is_empty());
        let ident: BTreeMap<usize, usize> = region.iter().map(|&v| (v, v)).collect();
        let r = doubling_check(&g, 2, &ident, &ident, &region, 5, 7).unwrap();
        assert!(!r.passed); // images not disjoint
        let disjoint_item = r
            .items
            .iter()
            .find(|i| i.label.contains("disjoint"))
            .unwrap();
        assert!(!disjoint_item.passed);
    }

    #[test]
    fn gamma_p_inequality_samples() {
        let r = gamma_p_boundary_test(5, 3, 42);
        assert!(r.passed, "failures: {:?}", r.failures().collect::<Vec<_>>());
        // identity case detail: 2 positive neighbors, 4 group neighbors
        let first = &r.items[0];
        assert!(first.detail.contains("|boundary_P| = 2"));
        assert!(first.detail.contains("|boundary_F| = 4"));
    }

    #[test]
    fn gamma_p_reports_are_deterministic() {
        let a = gamma_p_boundary_test(3, 3, 9).to_json();
        let b = gamma_p_boundary_test(3, 3, 9).to_json();
        assert_eq!(a, b);
    }
}
