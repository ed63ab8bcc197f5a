//! Points, lines and linear projectivities of PG(2, q), q = 2^r.
//!
//! Homogeneous triples are normalized so that the last nonzero coordinate is
//! one. Affine points are `(x, y, 1)`, points at infinity `(x, 1, 0)` and
//! `(1, 0, 0)`, and the line at infinity is `[0, 0, 1]`.

use std::fmt;

use thiserror::Error;

use crate::gf2::{FieldElement, FieldError, FieldSpec};

type Fe = FieldElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("the zero triple is not a projective point or line")]
    ZeroTriple,
    #[error("points coincide: {0}")]
    IdenticalPoints(ProjPoint),
    #[error("lines coincide: {0}")]
    IdenticalLines(ProjLine),
    #[error("matrix is singular")]
    Singular,
    #[error("homology multiplier must be nonzero")]
    ZeroMultiplier,
    #[error("projectivity is not a nontrivial central collineation with axis X3 = 0")]
    NotCentral,
    #[error("frame has three collinear points")]
    DegenerateFrame,
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn normalize_triple(spec: &FieldSpec, c: [Fe; 3]) -> Result<[Fe; 3], GeometryError> {
    let last = c
        .iter()
        .rposition(|x| !x.is_zero())
        .ok_or(GeometryError::ZeroTriple)?;
    spec.check(&c)?;
    if c[last] == Fe::ONE {
        return Ok(c);
    }
    let s = spec.inv(c[last])?;
    Ok(c.map(|x| spec.mul(x, s)))
}

fn cross(spec: &FieldSpec, a: &[Fe; 3], b: &[Fe; 3]) -> [Fe; 3] {
    let m = |x, y| spec.mul(x, y);
    [
        spec.add(m(a[1], b[2]), m(a[2], b[1])),
        spec.add(m(a[2], b[0]), m(a[0], b[2])),
        spec.add(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

fn dot(spec: &FieldSpec, a: &[Fe; 3], b: &[Fe; 3]) -> Fe {
    let m = |x, y| spec.mul(x, y);
    spec.add(spec.add(m(a[0], b[0]), m(a[1], b[1])), m(a[2], b[2]))
}

/// A point of PG(2, q) with its last nonzero coordinate equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint([Fe; 3]);

/// A line of PG(2, q), stored as its normalized dual triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjLine([Fe; 3]);

impl ProjPoint {
    /// Wraps a triple that is already normalized.
    pub fn from_normalized(c: [Fe; 3]) -> Self {
        debug_assert!(c.iter().rposition(|x| !x.is_zero()).is_some_and(|i| c[i] == Fe::ONE));
        ProjPoint(c)
    }

    /// The affine point `(x, y, 1)`.
    pub fn affine(x: Fe, y: Fe) -> Self {
        ProjPoint([x, y, Fe::ONE])
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.0
    }

    pub fn is_affine(&self) -> bool {
        self.0[2] == Fe::ONE
    }

    pub fn is_at_infinity(&self) -> bool {
        self.0[2].is_zero()
    }

    /// `(x, y)` for an affine point.
    pub fn affine_pair(&self) -> Option<(Fe, Fe)> {
        self.is_affine().then_some((self.0[0], self.0[1]))
    }
}

impl ProjLine {
    pub const INFINITY: ProjLine = ProjLine([Fe::ZERO, Fe::ZERO, Fe::ONE]);

    pub fn from_normalized(c: [Fe; 3]) -> Self {
        ProjLine(c)
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.0
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.0[0], self.0[1], self.0[2])
    }
}

/// A linear projectivity, scaled so its first nonzero entry (row-major) is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Projectivity([[Fe; 3]; 3]);

impl Projectivity {
    pub fn matrix(&self) -> [[Fe; 3]; 3] {
        self.0
    }

    /// Row-major entries.
    pub fn entries(&self) -> [Fe; 9] {
        let m = &self.0;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }
}

/// The projective plane PG(2, q) over a given field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Plane {
    spec: FieldSpec,
}

impl Plane {
    pub fn new(spec: FieldSpec) -> Self {
        Plane { spec }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.spec
    }

    /// q
    pub fn order(&self) -> usize {
        self.spec.order()
    }

    /// q^2 + q + 1, the number of points (and of lines).
    pub fn size(&self) -> usize {
        let q = self.order();
        q * q + q + 1
    }

    pub fn normalize(&self, c: [Fe; 3]) -> Result<ProjPoint, GeometryError> {
        normalize_triple(&self.spec, c).map(ProjPoint)
    }

    pub fn line(&self, c: [Fe; 3]) -> Result<ProjLine, GeometryError> {
        normalize_triple(&self.spec, c).map(ProjLine)
    }

    /// Dense index in `0..size()`: affine `(x, y, 1)` first, then `(x, 1, 0)`,
    /// then `(1, 0, 0)`.
    pub fn point_index(&self, p: &ProjPoint) -> usize {
        index_of(self.order(), &p.0)
    }

    pub fn point_at(&self, idx: usize) -> ProjPoint {
        ProjPoint(triple_at(self.order(), idx))
    }

    pub fn line_index(&self, l: &ProjLine) -> usize {
        index_of(self.order(), &l.0)
    }

    pub fn line_at(&self, idx: usize) -> ProjLine {
        ProjLine(triple_at(self.order(), idx))
    }

    /// All points, in index order.
    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.size()).map(|i| self.point_at(i))
    }

    pub fn lines(&self) -> impl Iterator<Item = ProjLine> + '_ {
        (0..self.size()).map(|i| self.line_at(i))
    }

    pub fn affine_points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        let q = self.order();
        (0..q * q).map(|i| self.point_at(i))
    }

    pub fn incident(&self, p: &ProjPoint, l: &ProjLine) -> bool {
        dot(&self.spec, &p.0, &l.0).is_zero()
    }

    /// The q + 1 points of a line.
    pub fn points_on(&self, l: &ProjLine) -> Vec<ProjPoint> {
        let spec = &self.spec;
        let [a, b, c] = l.0;
        let mut out = Vec::with_capacity(self.order() + 1);
        // Solve a x + b y + c z = 0 by cases on the normalization.
        let b_inv = (!b.is_zero()).then(|| spec.inv(b).expect("nonzero"));
        for x in spec.elements() {
            // z = 1: b y = a x + c
            if let Some(bi) = b_inv {
                let y = spec.mul(spec.add(spec.mul(a, x), c), bi);
                out.push(ProjPoint([x, y, Fe::ONE]));
            } else if spec.add(spec.mul(a, x), c).is_zero() {
                for y in spec.elements() {
                    out.push(ProjPoint([x, y, Fe::ONE]));
                }
            }
        }
        // z = 0, y = 1: a x + b = 0
        if !a.is_zero() {
            let x = spec.mul(b, spec.inv(a).expect("nonzero"));
            out.push(ProjPoint([x, Fe::ONE, Fe::ZERO]));
        } else if b.is_zero() {
            for x in spec.elements() {
                out.push(ProjPoint([x, Fe::ONE, Fe::ZERO]));
            }
        }
        // (1, 0, 0)
        if a.is_zero() {
            out.push(ProjPoint([Fe::ONE, Fe::ZERO, Fe::ZERO]));
        }
        out
    }

    pub fn line_through(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine, GeometryError> {
        if p == q {
            return Err(GeometryError::IdenticalPoints(*p));
        }
        self.line(cross(&self.spec, &p.0, &q.0))
    }

    pub fn meet(&self, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint, GeometryError> {
        if l == m {
            return Err(GeometryError::IdenticalLines(*l));
        }
        self.normalize(cross(&self.spec, &l.0, &m.0))
    }

    pub fn collinear(&self, p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> bool {
        det3(&self.spec, &[p.0, q.0, r.0]).is_zero()
    }

    /// Scales a matrix into canonical form; fails when it is singular.
    pub fn projectivity(&self, m: [[Fe; 3]; 3]) -> Result<Projectivity, GeometryError> {
        let spec = &self.spec;
        for row in &m {
            spec.check(row)?;
        }
        if det3(spec, &m).is_zero() {
            return Err(GeometryError::Singular);
        }
        let first = m.iter().flatten().find(|x| !x.is_zero()).copied().expect("nonsingular");
        let s = spec.inv(first)?;
        Ok(Projectivity(m.map(|row| row.map(|x| spec.mul(x, s)))))
    }

    pub fn identity(&self) -> Projectivity {
        let (o, z) = (Fe::ONE, Fe::ZERO);
        Projectivity([[o, z, z], [z, o, z], [z, z, o]])
    }

    /// The elation `(X1 + a1 X3, X2 + a2 X3, X3)` with axis X3 = 0.
    pub fn elation(&self, a1: Fe, a2: Fe) -> Projectivity {
        let (o, z) = (Fe::ONE, Fe::ZERO);
        Projectivity([[o, z, a1], [z, o, a2], [z, z, o]])
    }

    /// The map `(l X1 + a1 X3, l X2 + a2 X3, X3)`: a homology with axis
    /// X3 = 0 when `l != 1`, the elation by `(a1, a2)` when `l == 1`.
    pub fn homology(&self, lambda: Fe, a1: Fe, a2: Fe) -> Result<Projectivity, GeometryError> {
        if lambda.is_zero() {
            return Err(GeometryError::ZeroMultiplier);
        }
        let z = Fe::ZERO;
        self.projectivity([[lambda, z, a1], [z, lambda, a2], [z, z, Fe::ONE]])
    }

    /// Center of a nontrivial central collineation with axis X3 = 0.
    pub fn center(&self, phi: &Projectivity) -> Result<ProjPoint, GeometryError> {
        let spec = &self.spec;
        let m = &phi.0;
        if !(m[2][0].is_zero() && m[2][1].is_zero() && !m[2][2].is_zero()) {
            return Err(GeometryError::NotCentral);
        }
        let s = spec.inv(m[2][2])?;
        let e = |i: usize, j: usize| spec.mul(m[i][j], s);
        let lambda = e(0, 0);
        if e(1, 1) != lambda || !e(0, 1).is_zero() || !e(1, 0).is_zero() {
            return Err(GeometryError::NotCentral);
        }
        let (a1, a2) = (e(0, 2), e(1, 2));
        if lambda == Fe::ONE {
            if a1.is_zero() && a2.is_zero() {
                return Err(GeometryError::NotCentral);
            }
            return self.normalize([a1, a2, Fe::ZERO]);
        }
        self.normalize([a1, a2, spec.add(Fe::ONE, lambda)])
    }

    pub fn apply(&self, phi: &Projectivity, p: &ProjPoint) -> ProjPoint {
        let spec = &self.spec;
        let c = phi.0.map(|row| dot(spec, &row, &p.0));
        self.normalize(c).expect("projectivity is nonsingular")
    }

    /// `phi` after `psi`.
    pub fn compose(&self, phi: &Projectivity, psi: &Projectivity) -> Projectivity {
        let m = mat_mul(&self.spec, &phi.0, &psi.0);
        self.projectivity(m).expect("product of nonsingular matrices")
    }

    pub fn inverse(&self, phi: &Projectivity) -> Projectivity {
        let m = mat_inv(&self.spec, &phi.0).expect("nonsingular");
        self.projectivity(m).expect("nonsingular")
    }

    /// The unique projectivity sending `from[i]` to `to[i]`; both quadruples
    /// must have no three collinear points.
    pub fn frame_map(
        &self,
        from: &[ProjPoint; 4],
        to: &[ProjPoint; 4],
    ) -> Result<Projectivity, GeometryError> {
        let a = self.frame_matrix(from)?;
        let b = self.frame_matrix(to)?;
        let a_inv = mat_inv(&self.spec, &a).ok_or(GeometryError::Singular)?;
        self.projectivity(mat_mul(&self.spec, &b, &a_inv))
    }

    /// Matrix sending e1, e2, e3, e1+e2+e3 to the given frame.
    fn frame_matrix(&self, p: &[ProjPoint; 4]) -> Result<[[Fe; 3]; 3], GeometryError> {
        for skip in 0..4 {
            let t: Vec<_> = (0..4).filter(|&i| i != skip).map(|i| p[i]).collect();
            if self.collinear(&t[0], &t[1], &t[2]) {
                return Err(GeometryError::DegenerateFrame);
            }
        }
        let spec = &self.spec;
        // Columns are p0, p1, p2; solve for the scalars that hit p3.
        let cols = [[p[0].0[0], p[1].0[0], p[2].0[0]], [p[0].0[1], p[1].0[1], p[2].0[1]], [
            p[0].0[2], p[1].0[2], p[2].0[2],
        ]];
        let inv = mat_inv(spec, &cols).ok_or(GeometryError::DegenerateFrame)?;
        let lam = inv.map(|row| dot(spec, &row, &p[3].0));
        Ok(cols.map(|row| [0, 1, 2].map(|j| spec.mul(row[j], lam[j]))))
    }
}

fn index_of(q: usize, c: &[Fe; 3]) -> usize {
    let (x, y) = (c[0].value() as usize, c[1].value() as usize);
    if c[2] == Fe::ONE {
        x * q + y
    } else if c[1] == Fe::ONE {
        q * q + x
    } else {
        q * q + q
    }
}

fn triple_at(q: usize, idx: usize) -> [Fe; 3] {
    let fe = |v: usize| Fe::from_raw(v as u16);
    if idx < q * q {
        [fe(idx / q), fe(idx % q), Fe::ONE]
    } else if idx < q * q + q {
        [fe(idx - q * q), Fe::ONE, Fe::ZERO]
    } else {
        assert_eq!(idx, q * q + q, "index out of range");
        [Fe::ONE, Fe::ZERO, Fe::ZERO]
    }
}

fn det3(spec: &FieldSpec, m: &[[Fe; 3]; 3]) -> Fe {
    dot(spec, &m[0], &cross(spec, &m[1], &m[2]))
}

fn mat_mul(spec: &FieldSpec, a: &[[Fe; 3]; 3], b: &[[Fe; 3]; 3]) -> [[Fe; 3]; 3] {
    let bt = [0, 1, 2].map(|j| [b[0][j], b[1][j], b[2][j]]);
    a.map(|row| bt.map(|col| dot(spec, &row, &col)))
}

/// Adjugate over determinant; `None` when singular.
fn mat_inv(spec: &FieldSpec, m: &[[Fe; 3]; 3]) -> Option<[[Fe; 3]; 3]> {
    let d = det3(spec, m);
    let d_inv = spec.inv(d).ok()?;
    // Rows of the inverse are the cross products of column pairs; in
    // characteristic two the cofactor signs vanish.
    let cols = [0, 1, 2].map(|j| [m[0][j], m[1][j], m[2][j]]);
    let adj = [
        cross(spec, &cols[1], &cols[2]),
        cross(spec, &cols[2], &cols[0]),
        cross(spec, &cols[0], &cols[1]),
    ];
    Some(adj.map(|row| row.map(|x| spec.mul(x, d_inv))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(r: u32) -> Plane {
        Plane::new(FieldSpec::with_degree(r).unwrap())
    }

    fn fe(v: u16) -> Fe {
        Fe::from_raw(v)
    }

    fn pt(pl: &Plane, c: [u16; 3]) -> ProjPoint {
        pl.normalize(c.map(fe)).unwrap()
    }

    #[test]
    fn normalization() {
        let pl = plane(2);
        assert_eq!(pt(&pl, [3, 2, 1]).coords(), [fe(3), fe(2), fe(1)]);
        assert_eq!(pt(&pl, [0, 3, 0]).coords(), [fe(0), fe(1), fe(0)]);
        // omega = X in GF(4)
        assert_eq!(pt(&pl, [2, 2, 2]).coords(), [fe(1), fe(1), fe(1)]);
        assert_eq!(pl.normalize([fe(0); 3]), Err(GeometryError::ZeroTriple));
        let p = pt(&pl, [3, 1, 2]);
        assert_eq!(pl.normalize(p.coords()).unwrap(), p);
    }

    #[test]
    fn joins_and_collinearity() {
        let pl = plane(3);
        let l = pl.line_through(&pt(&pl, [0, 0, 1]), &pt(&pl, [1, 1, 1])).unwrap();
        assert_eq!(l.coords(), [fe(1), fe(1), fe(0)]);
        assert!(pl.incident(&pt(&pl, [0, 0, 1]), &l));
        assert!(pl.incident(&pt(&pl, [1, 1, 1]), &l));
        assert!(pl.collinear(&pt(&pl, [1, 0, 0]), &pt(&pl, [0, 1, 0]), &pt(&pl, [1, 1, 0])));
        assert!(!pl.collinear(&pt(&pl, [0, 0, 1]), &pt(&pl, [0, 1, 1]), &pt(&pl, [1, 0, 1])));
        let p = pt(&pl, [1, 0, 0]);
        assert_eq!(pl.line_through(&p, &p), Err(GeometryError::IdenticalPoints(p)));
        assert!(pl.meet(&l, &l).is_err());
    }

    #[test]
    fn points_on_lines() {
        for r in 1..=4 {
            let pl = plane(r);
            for l in pl.lines() {
                let on = pl.points_on(&l);
                assert_eq!(on.len(), pl.order() + 1, "line {l}");
                let brute: Vec<_> = pl.points().filter(|p| pl.incident(p, &l)).collect();
                let mut sorted = on.clone();
                sorted.sort();
                let mut b = brute;
                b.sort();
                assert_eq!(sorted, b);
            }
        }
    }

    #[test]
    fn elation_and_homology() {
        let pl = plane(3);
        let o = pt(&pl, [0, 0, 1]);
        let phi = pl.elation(fe(1), fe(1));
        assert_eq!(pl.apply(&phi, &o), pt(&pl, [1, 1, 1]));
        assert_eq!(pl.elation(fe(0), fe(0)), pl.identity());
        assert_eq!(pl.homology(fe(1), fe(3), fe(5)).unwrap(), pl.elation(fe(3), fe(5)));
        assert_eq!(pl.homology(fe(0), fe(1), fe(1)), Err(GeometryError::ZeroMultiplier));
        assert_eq!(pl.center(&pl.elation(fe(1), fe(0))).unwrap(), pt(&pl, [1, 0, 0]));
        assert_eq!(pl.center(&pl.identity()), Err(GeometryError::NotCentral));
    }

    #[test]
    fn homology_centers() {
        let pl = plane(3);
        let spec = *pl.field();
        for lam in spec.elements().filter(|l| l.value() > 1) {
            for a1 in spec.elements() {
                for a2 in spec.elements() {
                    let h = pl.homology(lam, a1, a2).unwrap();
                    let c = pl.center(&h).unwrap();
                    let expect = pl.normalize([a1, a2, spec.add(Fe::ONE, lam)]).unwrap();
                    assert_eq!(c, expect);
                    // fixed point, solved coordinate-wise: x = a / (1 + lambda)
                    assert_eq!(pl.apply(&h, &c), c);
                    let composed = pl.compose(&h, &pl.elation(Fe::ONE, Fe::ZERO));
                    let expect2 = pl
                        .normalize([spec.add(a1, lam), a2, spec.add(Fe::ONE, lam)])
                        .unwrap();
                    assert_eq!(pl.center(&composed).unwrap(), expect2);
                    for x in spec.elements() {
                        let inf = pl.normalize([x, Fe::ONE, Fe::ZERO]).unwrap();
                        assert_eq!(pl.apply(&h, &inf), inf);
                    }
                }
            }
        }
    }

    #[test]
    fn frame_maps() {
        let pl = plane(3);
        let frame = [[0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 1]].map(|c| pt(&pl, c));
        assert_eq!(pl.frame_map(&frame, &frame).unwrap(), pl.identity());
        let other = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]].map(|c| pt(&pl, c));
        let m = pl.frame_map(&frame, &other).unwrap();
        for i in 0..4 {
            assert_eq!(pl.apply(&m, &frame[i]), other[i]);
        }
        let bad = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 1, 1]].map(|c| pt(&pl, c));
        assert_eq!(pl.frame_map(&frame, &bad), Err(GeometryError::DegenerateFrame));

        // A translate-dilate of the frame comes from a map of homology shape.
        let h = pl.homology(fe(3), fe(5), fe(6)).unwrap();
        let image = frame.map(|p| pl.apply(&h, &p));
        let m = pl.frame_map(&frame, &image).unwrap();
        assert_eq!(m, h);
        assert_eq!(m.matrix()[2][0], Fe::ZERO);
        assert_eq!(m.matrix()[0][1], Fe::ZERO);
    }

    #[test]
    fn inverse_round_trip() {
        let pl = plane(4);
        let frame = [[0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 1]].map(|c| pt(&pl, c));
        let other = [[3, 7, 1], [1, 0, 0], [9, 2, 1], [0, 1, 0]].map(|c| pt(&pl, c));
        let m = pl.frame_map(&frame, &other).unwrap();
        let mi = pl.inverse(&m);
        assert_eq!(pl.compose(&m, &mi), pl.identity());
    }

    #[test]
    fn indices_are_dense() {
        let pl = plane(3);
        for i in 0..pl.size() {
            assert_eq!(pl.point_index(&pl.point_at(i)), i);
            assert_eq!(pl.line_index(&pl.line_at(i)), i);
        }
    }
}
