//! Blocking sets of the secants of an arc.
//!
//! A blocking set of a k-arc has at least k - 1 points. At that size every
//! blocker lies on exactly k/2 secants and every secant carries exactly one
//! blocker, so minimum blocking sets are exact covers of the secants and
//! only exist for even k.

use thiserror::Error;

use crate::arcs::{secants, translation_arc_at_origin, AdditiveSubgroup, Arc, ArcError};
use crate::gf2::{FieldElement, FieldSpec};
use crate::onefact::{collinear_set, standard_frame, OneFactorization};
use crate::projplane::{GeometryError, Plane, ProjPoint, Projectivity};

type Fe = FieldElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockingError {
    #[error("point {0} belongs to the arc")]
    MeetsArc(ProjPoint),
    #[error("not a blocking set of minimum size")]
    NotMinimum,
    #[error("the map is not a homology with axis X3 = 0")]
    NotHomology,
    #[error("homology center {0} lies on the arc")]
    CenterOnArc(ProjPoint),
    #[error("arc has {0} points, need at least 4")]
    TooSmall(usize),
    #[error("parameters violate the construction's conditions: {0}")]
    BadParameters(String),
    #[error("construction check failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A point set blocking every secant of `arc`, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingSet {
    arc: Arc,
    points: Vec<ProjPoint>,
}

impl BlockingSet {
    /// Validates disjointness from the arc and coverage of every secant.
    pub fn new(arc: Arc, mut points: Vec<ProjPoint>) -> Result<Self, BlockingError> {
        points.sort();
        points.dedup();
        if !is_blocking(&arc, &points)? {
            return Err(BlockingError::Verification("some secant is not blocked".into()));
        }
        Ok(BlockingSet { arc, points })
    }

    pub fn arc(&self) -> &Arc {
        &self.arc
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_minimum(&self) -> bool {
        self.points.len() + 1 == self.arc.len()
    }

    pub fn is_linear(&self) -> bool {
        is_linear(self.arc.plane(), &self.points)
    }
}

/// Whether every secant of `k` meets `b`; `b` must avoid `k`.
pub fn is_blocking(k: &Arc, b: &[ProjPoint]) -> Result<bool, BlockingError> {
    if let Some(p) = b.iter().find(|p| k.contains(p)) {
        return Err(BlockingError::MeetsArc(*p));
    }
    let plane = k.plane();
    Ok(secants(k)
        .lines()
        .iter()
        .all(|s| b.iter().any(|p| plane.incident(p, s))))
}

/// Whether all points lie on one line.
pub fn is_linear(plane: &Plane, b: &[ProjPoint]) -> bool {
    collinear_set(plane, b)
}

/// For every point off the arc, the secants through it.
fn secants_through_points(k: &Arc) -> Vec<Vec<usize>> {
    let plane = k.plane();
    let mut through = vec![Vec::new(); plane.size()];
    for (si, s) in secants(k).lines().iter().enumerate() {
        for p in plane.points_on(s) {
            if !k.contains(&p) {
                through[plane.point_index(&p)].push(si);
            }
        }
    }
    through
}

struct Cover<'a> {
    /// Candidate point indices and their secant lists.
    cands: &'a [(usize, Vec<usize>)],
    /// Candidates through each secant.
    by_secant: Vec<Vec<usize>>,
    covered: Vec<bool>,
    chosen: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl Cover<'_> {
    fn usable(&self, c: usize) -> bool {
        self.cands[c].1.iter().all(|&s| !self.covered[s])
    }

    fn search(&mut self) {
        // Branch on the uncovered secant with fewest usable candidates.
        let mut best: Option<(usize, usize)> = None;
        for s in 0..self.covered.len() {
            if self.covered[s] {
                continue;
            }
            let n = self.by_secant[s].iter().filter(|&&c| self.usable(c)).count();
            if best.is_none_or(|(_, m)| n < m) {
                best = Some((s, n));
                if n == 0 {
                    return;
                }
            }
        }
        let Some((s, _)) = best else {
            self.out.push(self.chosen.clone());
            return;
        };
        let options: Vec<usize> = self.by_secant[s].iter().copied().filter(|&c| self.usable(c)).collect();
        for c in options {
            for &t in &self.cands[c].1 {
                self.covered[t] = true;
            }
            self.chosen.push(c);
            self.search();
            self.chosen.pop();
            for &t in &self.cands[c].1 {
                self.covered[t] = false;
            }
        }
    }
}

/// All blocking sets of size k - 1, in canonical order.
pub fn min_blocking_sets(k: &Arc) -> Vec<BlockingSet> {
    let size = k.len();
    if size < 3 || size % 2 == 1 {
        return Vec::new();
    }
    let plane = k.plane();
    let through = secants_through_points(k);
    let cands: Vec<(usize, Vec<usize>)> = through
        .into_iter()
        .enumerate()
        .filter(|(_, s)| s.len() == size / 2)
        .collect();
    let n_secants = size * (size - 1) / 2;
    let mut by_secant = vec![Vec::new(); n_secants];
    for (ci, (_, ss)) in cands.iter().enumerate() {
        for &s in ss {
            by_secant[s].push(ci);
        }
    }
    let mut cover = Cover {
        cands: &cands,
        by_secant,
        covered: vec![false; n_secants],
        chosen: Vec::new(),
        out: Vec::new(),
    };
    cover.search();
    let mut sets: Vec<Vec<ProjPoint>> = cover
        .out
        .into_iter()
        .map(|sol| {
            debug_assert_eq!(sol.len(), size - 1);
            let mut pts: Vec<ProjPoint> = sol.iter().map(|&c| plane.point_at(cands[c].0)).collect();
            pts.sort();
            pts
        })
        .collect();
    sets.sort();
    sets.dedup();
    sets.into_iter()
        .map(|points| {
            let b = BlockingSet {
                arc: k.clone(),
                points,
            };
            debug_assert!(unique_blockers(&b).is_some());
            b
        })
        .collect()
}

/// For each secant (in [`secants`] order), the index in `b` of its single
/// blocker; `None` when some secant has zero or several blockers.
fn unique_blockers(b: &BlockingSet) -> Option<Vec<usize>> {
    let plane = b.arc.plane();
    secants(&b.arc)
        .lines()
        .iter()
        .map(|s| {
            let mut hits = b.points.iter().enumerate().filter(|(_, p)| plane.incident(p, s));
            let first = hits.next()?.0;
            hits.next().is_none().then_some(first)
        })
        .collect()
}

/// Arc `K_G ∪ phi(K_G)` and its blocking set made of the directions of `g`
/// and the centers of `phi ∘ phi_A` for all A in `g`.
pub fn ghf_construct(g: &AdditiveSubgroup, phi: &Projectivity) -> Result<(Arc, BlockingSet), BlockingError> {
    let spec = *g.field();
    let plane = Plane::new(spec);
    let base = translation_arc_at_origin(g)?;
    if base.len() < 4 {
        return Err(BlockingError::TooSmall(base.len()));
    }
    let center = plane.center(phi).map_err(|_| BlockingError::NotHomology)?;
    if !center.is_affine() {
        return Err(BlockingError::NotHomology);
    }
    if base.contains(&center) {
        return Err(BlockingError::CenterOnArc(center));
    }
    let mut pts = base.points().to_vec();
    pts.extend(base.points().iter().map(|p| plane.apply(phi, p)));
    let arc = Arc::new(plane, pts)?;

    let mut b = Vec::with_capacity(2 * g.len() - 1);
    for &(a1, a2) in g.elements() {
        if !(a1.is_zero() && a2.is_zero()) {
            b.push(plane.normalize([a1, a2, Fe::ZERO])?);
        }
        let composed = plane.compose(phi, &plane.elation(a1, a2));
        b.push(plane.center(&composed)?);
    }
    b.sort();
    let before = b.len();
    b.dedup();
    if b.len() != before || b.len() + 1 != arc.len() {
        return Err(BlockingError::Verification(format!(
            "expected {} distinct blockers, got {}",
            arc.len() - 1,
            b.len()
        )));
    }
    let bs = BlockingSet::new(arc.clone(), b)?;
    if bs.is_linear() {
        return Err(BlockingError::Verification("blocking set is linear".into()));
    }
    Ok((arc, bs))
}

/// The 4-point group {(0,0), (0,1), (1,0), (1,1)}.
pub fn unit_square_group(spec: FieldSpec) -> AdditiveSubgroup {
    AdditiveSubgroup::new(spec, vec![(Fe::ZERO, Fe::ONE), (Fe::ONE, Fe::ZERO)]).expect("independent")
}

/// Whether `(lambda, a1, a2)` satisfies lambda not in {0, 1} and
/// {a1, a2, a1 + a2} disjoint from {0, 1, lambda, lambda + 1}.
pub fn octagon_parameters_valid(spec: &FieldSpec, lambda: Fe, a1: Fe, a2: Fe) -> bool {
    if lambda.is_zero() || lambda == Fe::ONE {
        return false;
    }
    let forbidden = [Fe::ZERO, Fe::ONE, lambda, spec.add(lambda, Fe::ONE)];
    [a1, a2, spec.add(a1, a2)].iter().all(|x| !forbidden.contains(x))
}

/// Every valid `(lambda, a1, a2)` in scan order (lambda, then a1, then a2).
pub fn octagon_parameters(spec: &FieldSpec) -> Vec<(Fe, Fe, Fe)> {
    let mut out = Vec::new();
    for lambda in spec.elements() {
        for a1 in spec.elements() {
            for a2 in spec.elements() {
                if octagon_parameters_valid(spec, lambda, a1, a2) {
                    out.push((lambda, a1, a2));
                }
            }
        }
    }
    out
}

/// The 8-arc `K_G ∪ phi(K_G)` for the unit square group and the homology
/// `(l X1 + a1 X3, l X2 + a2 X3, X3)`, with its 7-point blocking set, which
/// is checked to be a Fano subplane.
pub fn example_otto(spec: FieldSpec, lambda: Fe, a1: Fe, a2: Fe) -> Result<(Arc, BlockingSet), BlockingError> {
    spec.check(&[lambda, a1, a2]).map_err(GeometryError::from)?;
    if !octagon_parameters_valid(&spec, lambda, a1, a2) {
        return Err(BlockingError::BadParameters(format!(
            "lambda = {lambda}, a1 = {a1}, a2 = {a2}"
        )));
    }
    let plane = Plane::new(spec);
    let phi = plane.homology(lambda, a1, a2)?;
    let (arc, b) = ghf_construct(&unit_square_group(spec), &phi)?;
    if !is_fano_subplane(&plane, b.points()) {
        return Err(BlockingError::Verification("blocking set is not a subplane of order 2".into()));
    }
    Ok((arc, b))
}

/// Seven points such that every line through two of them holds exactly
/// three of them.
pub fn is_fano_subplane(plane: &Plane, pts: &[ProjPoint]) -> bool {
    if pts.len() != 7 {
        return false;
    }
    for i in 0..7 {
        for j in i + 1..7 {
            let l = plane.line_through(&pts[i], &pts[j]).expect("distinct");
            if pts.iter().filter(|p| plane.incident(p, &l)).count() != 3 {
                return false;
            }
        }
    }
    true
}

/// Result of the triangle test: indices into the arc of the first triangle
/// whose side blockers are not collinear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCheck {
    pub triangles: usize,
    pub violation: Option<[usize; 3]>,
}

impl TriangleCheck {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// For every 3 arc points, the blockers of the three sides are collinear.
pub fn triangle_collinearity(b: &BlockingSet) -> Result<TriangleCheck, BlockingError> {
    if !b.is_minimum() {
        return Err(BlockingError::NotMinimum);
    }
    let blockers = unique_blockers(b).ok_or(BlockingError::NotMinimum)?;
    let k = b.arc.len();
    let plane = b.arc.plane();
    let sec = |i: usize, j: usize| {
        // index of pair (i, j), i < j, in lexicographic pair order
        i * (2 * k - i - 1) / 2 + (j - i - 1)
    };
    let mut triangles = 0;
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                triangles += 1;
                let q = [sec(i, j), sec(i, l), sec(j, l)].map(|s| b.points[blockers[s]]);
                if !plane.collinear(&q[0], &q[1], &q[2]) {
                    return Ok(TriangleCheck {
                        triangles,
                        violation: Some([i, j, l]),
                    });
                }
            }
        }
    }
    Ok(TriangleCheck {
        triangles,
        violation: None,
    })
}

/// 1-factorization of K_k: vertices are the arc points in canonical order,
/// one factor per blocker (in canonical order) holding the pairs whose
/// secant passes through it.
pub fn factorization_of(b: &BlockingSet) -> Result<OneFactorization, BlockingError> {
    if !b.is_minimum() {
        return Err(BlockingError::NotMinimum);
    }
    let blockers = unique_blockers(b).ok_or(BlockingError::NotMinimum)?;
    let mut factors = vec![Vec::new(); b.len()];
    for (&(i, j), &c) in secants(&b.arc).pairs().iter().zip(&blockers) {
        factors[c].push((i, j));
    }
    OneFactorization::new(b.arc.len(), factors).map_err(|e| BlockingError::Verification(e.to_string()))
}

/// Canonical representative of the projective class of a point set: over all
/// ordered 4-subsets in general position, map them to the standard frame and
/// keep the lexicographically least sorted image.
pub fn projective_canonical_form(plane: &Plane, pts: &[ProjPoint]) -> Vec<ProjPoint> {
    let frame = standard_frame(plane);
    let n = pts.len();
    let mut best: Option<Vec<ProjPoint>> = None;
    let mut img = Vec::with_capacity(n);
    for a in 0..n {
        for b in 0..n {
            if b == a {
                continue;
            }
            for c in 0..n {
                if c == a || c == b || plane.collinear(&pts[a], &pts[b], &pts[c]) {
                    continue;
                }
                for d in 0..n {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    let Ok(m) = plane.frame_map(&[pts[a], pts[b], pts[c], pts[d]], &frame) else {
                        continue;
                    };
                    img.clear();
                    img.extend(pts.iter().map(|p| plane.apply(&m, p)));
                    img.sort();
                    if best.as_ref().is_none_or(|b| img < *b) {
                        best = Some(img.clone());
                    }
                }
            }
        }
    }
    best.unwrap_or_else(|| {
        let mut v = pts.to_vec();
        v.sort();
        v
    })
}
