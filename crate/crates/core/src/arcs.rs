//! Translation arcs: orbits of an affine point under a group of elations
//! with axis X3 = 0, indexed by an additive subgroup of GF(q) x GF(q).
//!
//! Besides the basic constructors this module carries the doubling step
//! (adding a point that lies on no secant), the q-arc normal form
//! `a x + (a+1) y + b x^(2^i) + (b+1) y^(2^i) = 0`, and the iterated
//! completion that produces translation arcs which cover the affine plane
//! with their secants but sit in no hyperoval.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::gf2::{gcd, FieldElement, FieldError, FieldSpec};
use crate::projplane::{GeometryError, Plane, ProjLine, ProjPoint};

type Fe = FieldElement;

/// An element of GF(q) x GF(q).
pub type Pair = (FieldElement, FieldElement);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("three collinear points: {0}, {1}, {2}")]
    Collinear(ProjPoint, ProjPoint, ProjPoint),
    #[error("point {0} listed twice")]
    DuplicatePoint(ProjPoint),
    #[error("generators are not linearly independent over GF(2)")]
    DependentGenerators,
    #[error("point {0} is not affine")]
    NotAffine(ProjPoint),
    #[error("exponent {i} is not coprime to {r}")]
    NotCoprime { i: u32, r: u32 },
    #[error("point {0} lies on a secant of the arc")]
    OnSecant(ProjPoint),
    #[error("field order is not a square")]
    NotSquareOrder,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("affine point {0} lies on no secant")]
    NotAffinelyComplete(ProjPoint),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn pair_add(spec: &FieldSpec, a: Pair, b: Pair) -> Pair {
    (spec.add(a.0, b.0), spec.add(a.1, b.1))
}

fn pack(p: Pair) -> u32 {
    (p.0.value() << 16) | p.1.value()
}

/// Reduces a list of packed GF(2)-vectors to an echelon basis; returns the
/// basis and whether every input was independent of the previous ones.
fn echelon(vectors: impl IntoIterator<Item = u32>) -> (Vec<u32>, bool) {
    let mut basis: Vec<u32> = Vec::new();
    let mut independent = true;
    for v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v == 0 {
            independent = false;
        } else {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    (basis, independent)
}

/// An additive subgroup of GF(q) x GF(q), presented by a GF(2)-basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveSubgroup {
    spec: FieldSpec,
    basis: Vec<Pair>,
    elements: Vec<Pair>,
}

impl AdditiveSubgroup {
    /// Subgroup with the given basis; the pairs must be independent.
    pub fn new(spec: FieldSpec, basis: Vec<Pair>) -> Result<Self, ArcError> {
        for &(a, b) in &basis {
            spec.check(&[a, b])?;
        }
        let (_, independent) = echelon(basis.iter().map(|&p| pack(p)));
        if !independent {
            return Err(ArcError::DependentGenerators);
        }
        Ok(Self::from_basis(spec, basis))
    }

    /// Subgroup generated by arbitrary pairs.
    pub fn span(spec: FieldSpec, generators: &[Pair]) -> Result<Self, ArcError> {
        for &(a, b) in generators {
            spec.check(&[a, b])?;
        }
        let mut basis: Vec<Pair> = Vec::new();
        for &g in generators {
            let mut trial: Vec<u32> = basis.iter().map(|&p| pack(p)).collect();
            trial.push(pack(g));
            if echelon(trial).1 {
                basis.push(g);
            }
        }
        Ok(Self::from_basis(spec, basis))
    }

    pub fn trivial(spec: FieldSpec) -> Self {
        Self::from_basis(spec, Vec::new())
    }

    fn from_basis(spec: FieldSpec, basis: Vec<Pair>) -> Self {
        let mut elements = vec![(Fe::ZERO, Fe::ZERO)];
        for &b in &basis {
            let shifted: Vec<Pair> = elements.iter().map(|&e| pair_add(&spec, e, b)).collect();
            elements.extend(shifted);
        }
        AdditiveSubgroup {
            spec,
            basis,
            elements,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn basis(&self) -> &[Pair] {
        &self.basis
    }

    /// All 2^dim elements; element `m` is the sum of the basis vectors
    /// selected by the bits of `m`.
    pub fn elements(&self) -> &[Pair] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: Pair) -> bool {
        let (basis, _) = echelon(self.basis.iter().map(|&b| pack(b)));
        let mut v = pack(p);
        for &b in &basis {
            v = v.min(v ^ b);
        }
        v == 0
    }

    /// `{ (a, a^(2^i)) : a in H }` for the additive group H spanned by
    /// `h_basis`.
    pub fn frobenius_graph(spec: FieldSpec, h_basis: &[Fe], i: u32) -> Result<Self, ArcError> {
        let basis = h_basis.iter().map(|&a| (a, spec.frob(a, i))).collect();
        Self::new(spec, basis)
    }
}

/// A set of points with no three collinear, kept in canonical sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    plane: Plane,
    points: Vec<ProjPoint>,
}

impl Arc {
    pub fn new(plane: Plane, mut points: Vec<ProjPoint>) -> Result<Self, ArcError> {
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(ArcError::DuplicatePoint(w[0]));
        }
        if let Some((a, b, c)) = first_collinear_triple(&plane, &points) {
            return Err(ArcError::Collinear(a, b, c));
        }
        Ok(Arc { plane, points })
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
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

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Index of `p` in the canonical order.
    pub fn position(&self, p: &ProjPoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }
}

/// First collinear triple in lexicographic index order.
fn first_collinear_triple(plane: &Plane, pts: &[ProjPoint]) -> Option<(ProjPoint, ProjPoint, ProjPoint)> {
    // Quick screen by line multiplicities, then an ordered scan for the witness.
    let mut counts: HashMap<ProjLine, u32> = HashMap::new();
    let mut bad = false;
    'outer: for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let l = plane.line_through(&pts[i], &pts[j]).expect("distinct points");
            let c = counts.entry(l).or_insert(0);
            *c += 1;
            if *c > 1 {
                bad = true;
                break 'outer;
            }
        }
    }
    if !bad {
        return None;
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if plane.collinear(&pts[i], &pts[j], &pts[k]) {
                    return Some((pts[i], pts[j], pts[k]));
                }
            }
        }
    }
    unreachable!("line shared by two pairs implies a collinear triple")
}

/// One line per unordered pair of arc points, pairs in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecantSet {
    lines: Vec<ProjLine>,
    pairs: Vec<(usize, usize)>,
}

impl SecantSet {
    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    /// Point indices (into the arc's canonical order) of each secant.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

pub fn secants(k: &Arc) -> SecantSet {
    let pts = k.points();
    let mut lines = Vec::with_capacity(pts.len() * pts.len().saturating_sub(1) / 2);
    let mut pairs = Vec::with_capacity(lines.capacity());
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            lines.push(k.plane.line_through(&pts[i], &pts[j]).expect("distinct points"));
            pairs.push((i, j));
        }
    }
    SecantSet { lines, pairs }
}

/// Points at infinity `(a, b, 0)` for the nonzero elements of `g`.
pub fn secant_directions(g: &AdditiveSubgroup) -> BTreeSet<ProjPoint> {
    let plane = Plane::new(g.spec);
    g.elements()
        .iter()
        .filter(|&&(a, b)| !(a.is_zero() && b.is_zero()))
        .map(|&(a, b)| plane.normalize([a, b, Fe::ZERO]).expect("nonzero"))
        .collect()
}

/// Orbit of the affine point `p` under the elations indexed by `g`.
pub fn translation_arc(g: &AdditiveSubgroup, p: &ProjPoint) -> Result<Arc, ArcError> {
    let (x, y) = p.affine_pair().ok_or(ArcError::NotAffine(*p))?;
    let spec = g.spec;
    let pts = g
        .elements()
        .iter()
        .map(|&(a, b)| ProjPoint::affine(spec.add(x, a), spec.add(y, b)))
        .collect();
    Arc::new(Plane::new(spec), pts)
}

/// The orbit of the origin, `{ (a, b, 1) : (a, b) in g }`.
pub fn translation_arc_at_origin(g: &AdditiveSubgroup) -> Result<Arc, ArcError> {
    translation_arc(g, &ProjPoint::affine(Fe::ZERO, Fe::ZERO))
}

/// `{ (a, a^2) : a in H }`.
pub fn example_n1(spec: FieldSpec, h_basis: &[Fe]) -> Result<Arc, ArcError> {
    let g = AdditiveSubgroup::frobenius_graph(spec, h_basis, 1)?;
    translation_arc_at_origin(&g)
}

/// `{ (a, a^(2^i)) : a in H }` with gcd(i, r) = 1; lies in a translation
/// hyperoval.
pub fn example_n2(spec: FieldSpec, h_basis: &[Fe], i: u32) -> Result<Arc, ArcError> {
    let r = spec.degree();
    if gcd(i, r) != 1 {
        return Err(ArcError::NotCoprime { i, r });
    }
    let g = AdditiveSubgroup::frobenius_graph(spec, h_basis, i)?;
    translation_arc_at_origin(&g)
}

/// Result of the doubled conic construction over GF(q), q a square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledConic {
    pub eta: Fe,
    pub b: Fe,
    pub group: AdditiveSubgroup,
    pub arc: Arc,
}

/// Doubles the arc `{ (a, a^2, 1) : a in GF(sqrt q) }` by the elation with
/// `A = (eta, b eta^2)`. Requires `b` in the subfield, `b != 1`, `eta`
/// outside the subfield, and A on no secant of the base arc.
pub fn example_n3(spec: FieldSpec, eta: Fe, b: Fe) -> Result<DoubledConic, ArcError> {
    let r = spec.degree();
    if !r.is_multiple_of(2) {
        return Err(ArcError::NotSquareOrder);
    }
    spec.check(&[eta, b])?;
    let half = r / 2;
    if spec.frob(b, half) != b || b == Fe::ONE {
        return Err(ArcError::InvalidParameter(format!(
            "b = {b} must lie in the subfield of order 2^{half} and differ from 1"
        )));
    }
    if spec.frob(eta, half) == eta {
        return Err(ArcError::InvalidParameter(format!(
            "eta = {eta} must lie outside the subfield of order 2^{half}"
        )));
    }
    let sub = spec.subfield(half)?;
    let h_basis = gf2_basis(&spec, &sub);
    let base = AdditiveSubgroup::frobenius_graph(spec, &h_basis, 1)?;
    let a = (eta, spec.mul(b, spec.square(eta)));
    let group = extend_double(&base, a)?;
    let arc = translation_arc_at_origin(&group)?;
    Ok(DoubledConic { eta, b, group, arc })
}

/// All `(eta, b)` accepted by [`example_n3`], in scan order.
pub fn example_n3_candidates(spec: FieldSpec) -> Result<Vec<DoubledConic>, ArcError> {
    let r = spec.degree();
    if !r.is_multiple_of(2) {
        return Err(ArcError::NotSquareOrder);
    }
    let sub = spec.subfield(r / 2)?;
    let mut out = Vec::new();
    for eta in spec.elements() {
        for &b in &sub {
            match example_n3(spec, eta, b) {
                Ok(d) => out.push(d),
                Err(ArcError::InvalidParameter(_)) | Err(ArcError::OnSecant(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Checks that half of a doubled conic lies on `X2 X3 = X1^2` and the other
/// half on `X2 X3 = X1^2 + (b+1) eta^2 X3^2`.
pub fn splits_across_conics(d: &DoubledConic) -> bool {
    let spec = *d.group.field();
    let c = spec.mul(spec.add(d.b, Fe::ONE), spec.square(d.eta));
    let on = |p: &ProjPoint, c: Fe| {
        let [x, y, z] = p.coords();
        spec.mul(y, z) == spec.add(spec.square(x), spec.mul(c, spec.square(z)))
    };
    let first = d.arc.points().iter().filter(|p| on(p, Fe::ZERO)).count();
    let second = d.arc.points().iter().filter(|p| on(p, c)).count();
    let half = d.arc.len() / 2;
    first == half && second == half && d.arc.points().iter().all(|p| on(p, Fe::ZERO) ^ on(p, c))
}

/// A GF(2)-basis of an additive group given by its elements.
pub fn gf2_basis(spec: &FieldSpec, elems: &[Fe]) -> Vec<Fe> {
    let mut basis = Vec::new();
    let mut packed: Vec<u32> = Vec::new();
    for &e in elems {
        spec.check(&[e]).expect("element of the field");
        let mut trial = packed.clone();
        trial.push(e.value());
        if echelon(trial).1 {
            packed.push(e.value());
            basis.push(e);
        }
    }
    basis
}

/// Lines disjoint from `k` that meet the secants in exactly k - 1 points.
pub fn hyperfocused_lines(k: &Arc) -> Vec<ProjLine> {
    let plane = k.plane;
    let target = k.len().saturating_sub(1);
    // A point of an external line is a secant intersection iff it lies on
    // some secant, so mark the union of the secants once.
    let mut covered = vec![false; plane.size()];
    for s in secants(k).lines() {
        for p in plane.points_on(s) {
            covered[plane.point_index(&p)] = true;
        }
    }
    plane
        .lines()
        .filter(|l| {
            let on = plane.points_on(l);
            !on.iter().any(|p| k.contains(p))
                && on.iter().filter(|p| covered[plane.point_index(p)]).count() == target
        })
        .collect()
}

/// Subgroup spanned by `g` and `a`, provided `(a, 1)` lies on no secant of
/// the origin orbit of `g` (and is not one of its points).
pub fn extend_double(g: &AdditiveSubgroup, a: Pair) -> Result<AdditiveSubgroup, ArcError> {
    let spec = g.spec;
    spec.check(&[a.0, a.1])?;
    let p = ProjPoint::affine(a.0, a.1);
    let k = translation_arc_at_origin(g)?;
    if k.contains(&p) {
        return Err(ArcError::OnSecant(p));
    }
    let plane = Plane::new(spec);
    if secants(&k).lines().iter().any(|s| plane.incident(&p, s)) {
        return Err(ArcError::OnSecant(p));
    }
    let mut basis = g.basis.clone();
    basis.push(a);
    let doubled = AdditiveSubgroup::new(spec, basis)?;
    // The doubled orbit is an arc; re-checked here.
    translation_arc_at_origin(&doubled)?;
    Ok(doubled)
}

/// Affine points off `k` that lie on no secant of `k`, in index order.
pub fn uncovered_affine(k: &Arc) -> Vec<ProjPoint> {
    let plane = k.plane;
    let q = plane.order();
    let mut covered = vec![false; q * q];
    for s in secants(k).lines() {
        for p in plane.points_on(s) {
            if p.is_affine() {
                covered[plane.point_index(&p)] = true;
            }
        }
    }
    for p in k.points() {
        if p.is_affine() {
            covered[plane.point_index(p)] = true;
        }
    }
    covered
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| plane.point_at(i))
        .collect()
}

/// Left side of `a x + (a+1) y + b x^(2^i) + (b+1) y^(2^i)`.
fn normal_form_value(spec: &FieldSpec, alpha: Fe, beta: Fe, i: u32, (x, y): Pair) -> Fe {
    let one = Fe::ONE;
    let lin = spec.add(spec.mul(alpha, x), spec.mul(spec.add(alpha, one), y));
    let fx = spec.frob(x, i);
    let fy = spec.frob(y, i);
    let frob = spec.add(spec.mul(beta, fx), spec.mul(spec.add(beta, one), fy));
    spec.add(lin, frob)
}

/// Affine solution set of the normal form equation, as a subgroup (the left
/// side is GF(2)-linear in `(x, y)`).
pub fn normal_form_solutions(spec: FieldSpec, alpha: Fe, beta: Fe, i: u32) -> AdditiveSubgroup {
    let r = spec.degree();
    let units: Vec<Pair> = (0..r)
        .map(|j| (Fe::from_raw(1 << j), Fe::ZERO))
        .chain((0..r).map(|j| (Fe::ZERO, Fe::from_raw(1 << j))))
        .collect();
    let images: Vec<u32> = units
        .iter()
        .map(|&u| normal_form_value(&spec, alpha, beta, i, u).value())
        .collect();
    // Kernel of the 2r x r matrix over GF(2): eliminate with a tag tracking
    // which input combination produced each row.
    let n = units.len();
    let mut rows: Vec<(u32, u64)> = images.iter().enumerate().map(|(j, &v)| (v, 1u64 << j)).collect();
    let mut pivot_row = 0;
    for bit in (0..r).rev() {
        let Some(pos) = (pivot_row..n).find(|&j| rows[j].0 >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(pivot_row, pos);
        let piv = rows[pivot_row];
        for (j, row) in rows.iter_mut().enumerate() {
            if j != pivot_row && row.0 >> bit & 1 == 1 {
                row.0 ^= piv.0;
                row.1 ^= piv.1;
            }
        }
        pivot_row += 1;
    }
    let basis = rows[pivot_row..]
        .iter()
        .map(|&(_, tag)| {
            (0..n)
                .filter(|&j| tag >> j & 1 == 1)
                .fold((Fe::ZERO, Fe::ZERO), |acc, j| pair_add(&spec, acc, units[j]))
        })
        .collect();
    AdditiveSubgroup::new(spec, basis).expect("kernel basis is independent")
}

/// The q-arc `{ (x, y, 1) : a x + (a+1) y + b x^(2^i) + (b+1) y^(2^i) = 0 }`,
/// or `None` when the solution set is not a q-arc.
pub fn lemma_iper_arc(spec: FieldSpec, alpha: Fe, beta: Fe, i: u32) -> Result<Option<Arc>, ArcError> {
    let r = spec.degree();
    if gcd(i, r) != 1 {
        return Err(ArcError::NotCoprime { i, r });
    }
    spec.check(&[alpha, beta])?;
    let g = normal_form_solutions(spec, alpha, beta, i);
    if g.len() != spec.order() {
        return Ok(None);
    }
    Ok(translation_arc_at_origin(&g).ok())
}

/// All translation q-arcs that contain the origin orbit of `g`, found by
/// scanning the normal form parameters. Requires (0,0) and (1,1) in `g`.
pub fn translation_superarcs(g: &AdditiveSubgroup) -> Result<Vec<Arc>, ArcError> {
    let spec = g.spec;
    let r = spec.degree();
    if !g.contains((Fe::ONE, Fe::ONE)) {
        return Err(ArcError::InvalidParameter("(1, 1) must lie in the subgroup".into()));
    }
    let mut found: BTreeSet<Vec<ProjPoint>> = BTreeSet::new();
    for i in (1..r.max(2)).filter(|&i| gcd(i, r) == 1) {
        for alpha in spec.elements() {
            for beta in spec.elements() {
                // Linear in the point, so checking the basis suffices.
                if g.basis()
                    .iter()
                    .any(|&p| !normal_form_value(&spec, alpha, beta, i, p).is_zero())
                {
                    continue;
                }
                if let Some(arc) = lemma_iper_arc(spec, alpha, beta, i)? {
                    found.insert(arc.points().to_vec());
                }
            }
        }
    }
    let plane = Plane::new(spec);
    Ok(found
        .into_iter()
        .map(|pts| Arc::new(plane, pts).expect("already an arc"))
        .collect())
}

/// Outcome of the hyperoval test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HyperovalVerdict {
    Contained(Arc),
    NotContained,
}

/// Outcome of the subplane cardinality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubplaneVerdict {
    NotContained,
    Inconclusive,
}

/// Decides whether an affinely complete arc lies in a hyperoval. Every
/// affine point off `k` is on a secant, so a hyperoval through `k` can only
/// add points at infinity that lie on no secant.
pub fn check_hyperoval_containment(k: &Arc) -> Result<HyperovalVerdict, ArcError> {
    if let Some(p) = uncovered_affine(k).first() {
        return Err(ArcError::NotAffinelyComplete(*p));
    }
    let plane = k.plane;
    let q = plane.order();
    if k.len() < q {
        return Ok(HyperovalVerdict::NotContained);
    }
    let secs = secants(k);
    let extras: Vec<ProjPoint> = plane
        .points_on(&ProjLine::INFINITY)
        .into_iter()
        .filter(|p| !k.contains(p) && !secs.lines().iter().any(|s| plane.incident(p, s)))
        .collect();
    let need = (q + 2).saturating_sub(k.len());
    if need > extras.len() {
        return Ok(HyperovalVerdict::NotContained);
    }
    for combo in combinations(extras.len(), need) {
        let mut pts = k.points().to_vec();
        pts.extend(combo.iter().map(|&i| extras[i]));
        if let Ok(h) = Arc::new(plane, pts) {
            return Ok(HyperovalVerdict::Contained(h));
        }
    }
    Ok(HyperovalVerdict::NotContained)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest proper divisor of `r` (0 when r = 1).
pub fn largest_proper_divisor(r: u32) -> u32 {
    (1..r).rev().find(|d| r.is_multiple_of(*d)).unwrap_or(0)
}

/// A proper subplane of PG(2, 2^r) has order at most 2^s with s the largest
/// proper divisor of r, so holds arcs of at most 2^s + 2 points.
pub fn check_subplane_bound(k: &Arc) -> SubplaneVerdict {
    let r = k.plane.field().degree();
    let s = largest_proper_divisor(r);
    if s == 0 {
        return SubplaneVerdict::NotContained;
    }
    if k.len() > (1usize << s) + 2 {
        SubplaneVerdict::NotContained
    } else {
        SubplaneVerdict::Inconclusive
    }
}

/// Record of a completion run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionCertificate {
    pub r: u32,
    pub s: u32,
    /// Starting group `{ (a, a^2) : a in GF(2^s) }`.
    pub base: AdditiveSubgroup,
    /// Translation q-arcs through the starting arc.
    pub superarcs: Vec<Arc>,
    /// Extension points in the order they were added.
    pub extensions: Vec<Pair>,
    pub group: AdditiveSubgroup,
    pub arc: Arc,
    pub affinely_complete: bool,
    /// `None` when the arc is not affinely complete.
    pub hyperoval: Option<HyperovalVerdict>,
    pub subplane: SubplaneVerdict,
}

/// Starting from `{ (a, a^2) : a in GF(2^s) }`, repeatedly doubles by the
/// first affine point (in index order) on no secant until every affine point
/// is covered. The first extension point also avoids every translation q-arc
/// through the starting arc.
pub fn build_complete_translation_arc(r: u32, s: u32) -> Result<CompletionCertificate, ArcError> {
    if s <= 2 || s >= r || !r.is_multiple_of(s) {
        return Err(ArcError::InvalidParameter(format!(
            "s = {s} must be a proper divisor of r = {r} larger than 2"
        )));
    }
    let spec = FieldSpec::with_degree(r)?;
    let sub = spec.subfield(s)?;
    let base = AdditiveSubgroup::frobenius_graph(spec, &gf2_basis(&spec, &sub), 1)?;
    let superarcs = translation_superarcs(&base)?;
    let mut group = base.clone();
    let mut arc = translation_arc_at_origin(&group)?;
    let mut extensions = Vec::new();
    loop {
        let uncovered = uncovered_affine(&arc);
        let next = uncovered
            .into_iter()
            .find(|p| !extensions.is_empty() || superarcs.iter().all(|i| !i.contains(p)));
        let Some(p) = next else { break };
        let a = p.affine_pair().expect("affine");
        group = extend_double(&group, a)?;
        arc = translation_arc_at_origin(&group)?;
        extensions.push(a);
        if arc.len() >= spec.order() {
            break;
        }
    }
    let affinely_complete = uncovered_affine(&arc).is_empty();
    let hyperoval = if affinely_complete {
        Some(check_hyperoval_containment(&arc)?)
    } else {
        None
    };
    let subplane = check_subplane_bound(&arc);
    Ok(CompletionCertificate {
        r,
        s,
        base,
        superarcs,
        extensions,
        group,
        arc,
        affinely_complete,
        hyperoval,
        subplane,
    })
}
