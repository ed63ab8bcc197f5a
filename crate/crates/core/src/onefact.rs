//! 1-factorizations of complete graphs K_2n.
//!
//! Enumeration up to isomorphism, the triangle closure that forces
//! collinearity of focus points, embeddings into PG(2, q), and the driver
//! that classifies minimum blocking sets of small arcs through them.
//!
//! Vertices are 0-based internally; the catalog text format is 1-based.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::blocking::projective_canonical_form;
use crate::gf2::FieldSpec;
use crate::projplane::{Plane, ProjLine, ProjPoint};

/// Largest K_2n handled (n = 6); enumeration is only contracted up to n = 5.
pub const MAX_ORDER: usize = 12;

const NONE: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OneFactError {
    #[error("vertex count {0} must be even and in 4..={MAX_ORDER}")]
    BadOrder(usize),
    #[error("n = {0} is outside the supported range 2..=6")]
    BadHalfOrder(usize),
    #[error("expected {expected} factors, found {found}")]
    FactorCount { expected: usize, found: usize },
    #[error("factor {factor} is not a perfect matching")]
    NotPerfectMatching { factor: usize },
    #[error("edge {0}-{1} appears in more than one factor")]
    RepeatedEdge(usize, usize),
    #[error("bad edge {0}-{1}")]
    BadEdge(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A perfect matching, edges sorted with the smaller vertex first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OneFactor {
    edges: Vec<(u8, u8)>,
}

impl OneFactor {
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        let e = (u.min(v) as u8, u.max(v) as u8);
        self.edges.binary_search(&e).is_ok()
    }
}

/// An ordered list of 2n - 1 edge-disjoint perfect matchings of K_2n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneFactorization {
    order: usize,
    factors: Vec<OneFactor>,
    /// `color[u * order + v]` is the factor holding edge uv.
    color: Vec<u8>,
}

impl OneFactorization {
    /// Builds and validates a factorization from 0-based edge lists.
    pub fn new(order: usize, factors: Vec<Vec<(usize, usize)>>) -> Result<Self, OneFactError> {
        if order < 2 || !order.is_multiple_of(2) || order > MAX_ORDER {
            return Err(OneFactError::BadOrder(order));
        }
        if factors.len() != order - 1 {
            return Err(OneFactError::FactorCount {
                expected: order - 1,
                found: factors.len(),
            });
        }
        let mut color = vec![NONE; order * order];
        let mut out = Vec::with_capacity(factors.len());
        for (fi, edges) in factors.into_iter().enumerate() {
            let mut seen = 0u32;
            let mut norm = Vec::with_capacity(edges.len());
            for (u, v) in edges {
                if u >= order || v >= order || u == v {
                    return Err(OneFactError::BadEdge(u, v));
                }
                if seen >> u & 1 == 1 || seen >> v & 1 == 1 {
                    return Err(OneFactError::NotPerfectMatching { factor: fi });
                }
                seen |= 1 << u | 1 << v;
                if color[u * order + v] != NONE {
                    return Err(OneFactError::RepeatedEdge(u.min(v), u.max(v)));
                }
                color[u * order + v] = fi as u8;
                color[v * order + u] = fi as u8;
                norm.push((u.min(v) as u8, u.max(v) as u8));
            }
            if seen.count_ones() as usize != order {
                return Err(OneFactError::NotPerfectMatching { factor: fi });
            }
            norm.sort_unstable();
            out.push(OneFactor { edges: norm });
        }
        Ok(OneFactorization {
            order,
            factors: out,
            color,
        })
    }

    /// Same as [`new`](Self::new) with 1-based vertex labels.
    pub fn from_one_based(order: usize, factors: &[&[(usize, usize)]]) -> Result<Self, OneFactError> {
        let zero = factors
            .iter()
            .map(|f| {
                f.iter()
                    .map(|&(a, b)| (a.wrapping_sub(1), b.wrapping_sub(1)))
                    .collect()
            })
            .collect();
        Self::new(order, zero)
    }

    fn from_colors(order: usize, color: Vec<u8>) -> Self {
        let mut factors = vec![Vec::new(); order - 1];
        for u in 0..order {
            for v in u + 1..order {
                factors[color[u * order + v] as usize].push((u, v));
            }
        }
        Self::new(order, factors).expect("valid coloring")
    }

    /// Number of vertices, 2n.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[OneFactor] {
        &self.factors
    }

    /// Index of the factor containing edge uv.
    #[inline]
    pub fn factor_of(&self, u: usize, v: usize) -> usize {
        self.color[u * self.order + v] as usize
    }

    /// Image under the vertex map `perm[old] = new`, factors kept in order.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let factors = self
            .factors
            .iter()
            .map(|f| f.edges().map(|(a, b)| (perm[a], perm[b])).collect())
            .collect();
        Self::new(self.order, factors).expect("permutation preserves validity")
    }

    /// Same factors, listed in a different order (`order[i]` is the old index
    /// of the new i-th factor).
    pub fn reorder_factors(&self, order: &[usize]) -> Self {
        let factors = order
            .iter()
            .map(|&i| self.factors[i].edges().collect())
            .collect();
        Self::new(self.order, factors).expect("reordering preserves validity")
    }

    /// Catalog line: 1-based pairs `a-b`, factors separated by `|`, factors
    /// sorted by their smallest edge.
    pub fn to_catalog_line(&self) -> String {
        let mut factors: Vec<&OneFactor> = self.factors.iter().collect();
        factors.sort();
        factors
            .iter()
            .map(|f| {
                f.edges()
                    .map(|(a, b)| format!("{}-{}", a + 1, b + 1))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Parses one catalog line (`line_no` is used in diagnostics).
    pub fn parse_catalog_line(text: &str, line_no: usize) -> Result<Self, OneFactError> {
        let err = |msg: String| OneFactError::Parse { line: line_no, msg };
        let mut factors = Vec::new();
        let mut max_vertex = 0;
        for (fi, part) in text.trim().split('|').enumerate() {
            let mut edges = Vec::new();
            for tok in part.split_whitespace() {
                let (a, b) = tok
                    .split_once('-')
                    .ok_or_else(|| err(format!("factor {}: malformed pair {tok:?}", fi + 1)))?;
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1)
                        .ok_or_else(|| err(format!("factor {}: bad vertex {s:?}", fi + 1)))
                };
                let (a, b) = (parse(a)?, parse(b)?);
                max_vertex = max_vertex.max(a).max(b);
                edges.push((a - 1, b - 1));
            }
            if edges.is_empty() {
                return Err(err(format!("factor {} is empty", fi + 1)));
            }
            factors.push(edges);
        }
        Self::new(max_vertex, factors).map_err(|e| err(e.to_string()))
    }
}

impl fmt::Display for OneFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_catalog_line())
    }
}

/// Parses a whole catalog; blank lines and `#` comments are skipped.
pub fn parse_catalog(text: &str) -> Result<Vec<OneFactorization>, OneFactError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| OneFactorization::parse_catalog_line(l, i + 1))
        .collect()
}

pub fn format_catalog(fs: &[OneFactorization]) -> String {
    let mut s = String::new();
    for f in fs {
        s.push_str(&f.to_catalog_line());
        s.push('\n');
    }
    s
}

/// Reference factorizations used in tests and reports.
pub mod fixtures {
    use super::OneFactorization;

    /// A factorization of K_6 (every one is isomorphic to it).
    pub fn k6_reference() -> OneFactorization {
        OneFactorization::from_one_based(
            6,
            &[
                &[(1, 2), (3, 4), (5, 6)],
                &[(1, 3), (2, 5), (4, 6)],
                &[(1, 4), (2, 6), (3, 5)],
                &[(1, 5), (2, 4), (3, 6)],
                &[(1, 6), (2, 3), (4, 5)],
            ],
        )
        .expect("valid")
    }

    /// The K_8 class realized by the homology construction (its focus points
    /// need not be collinear).
    pub fn k8_homology_class() -> OneFactorization {
        OneFactorization::from_one_based(
            8,
            &[
                &[(8, 1), (2, 3), (4, 5), (6, 7)],
                &[(8, 2), (1, 3), (4, 6), (5, 7)],
                &[(8, 3), (1, 2), (4, 7), (5, 6)],
                &[(8, 4), (1, 5), (2, 6), (3, 7)],
                &[(8, 5), (1, 4), (2, 7), (3, 6)],
                &[(8, 6), (1, 7), (2, 4), (3, 5)],
                &[(8, 7), (1, 6), (2, 5), (3, 4)],
            ],
        )
        .expect("valid")
    }

    /// A K_8 class whose triangle closure forces collinear focus points.
    pub fn k8_forced_linear_class() -> OneFactorization {
        OneFactorization::from_one_based(
            8,
            &[
                &[(8, 1), (2, 3), (4, 5), (6, 7)],
                &[(8, 2), (1, 4), (3, 6), (5, 7)],
                &[(8, 3), (1, 6), (2, 5), (4, 7)],
                &[(8, 4), (1, 7), (2, 6), (3, 5)],
                &[(8, 5), (1, 2), (3, 7), (4, 6)],
                &[(8, 6), (1, 5), (2, 7), (3, 4)],
                &[(8, 7), (1, 3), (2, 4), (5, 6)],
            ],
        )
        .expect("valid")
    }
}

// ---------------------------------------------------------------------------
// Canonical form

/// Cycle lengths (descending) of the union of two factors.
fn pair_cycle_type(order: usize, color: &[u8], a: u8, b: u8) -> Vec<u8> {
    let partner = |u: usize, c: u8| (0..order).find(|&v| v != u && color[u * order + v] == c).expect("perfect matching");
    let mut seen = 0u32;
    let mut lens = Vec::new();
    for start in 0..order {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut len = 0;
        let mut u = start;
        let mut use_a = true;
        loop {
            seen |= 1 << u;
            u = partner(u, if use_a { a } else { b });
            use_a = !use_a;
            len += 1;
            if u == start && use_a {
                break;
            }
        }
        lens.push(len as u8);
    }
    lens.sort_unstable_by(|x, y| y.cmp(x));
    lens
}

/// Isomorphism-invariant encoding of a factorization: the lexicographically
/// least edge coloring over all vertex relabelings that send some pair of
/// factors of minimal cycle type onto a fixed standard pair, with factor
/// names assigned in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    order: u8,
    code: Vec<u8>,
}

impl CanonicalForm {
    /// The representative factorization (factors sorted by partner of
    /// vertex 0).
    pub fn to_factorization(&self) -> OneFactorization {
        let n = self.order as usize;
        let mut color = vec![NONE; n * n];
        let mut it = self.code.iter();
        for u in 0..n {
            for v in u + 1..n {
                let c = *it.next().expect("code length");
                color[u * n + v] = c;
                color[v * n + u] = c;
            }
        }
        OneFactorization::from_colors(n, color)
    }

    pub fn code(&self) -> &[u8] {
        &self.code
    }
}

struct CanonSearch<'a> {
    order: usize,
    color: &'a [u8],
    best: Vec<u8>,
    have_best: bool,
    inv: Vec<usize>,
    relabel: Vec<u8>,
    buf: Vec<u8>,
}

impl CanonSearch<'_> {
    /// Compares the coloring under `inv` (new -> old) against the best so far.
    fn evaluate(&mut self) {
        let n = self.order;
        self.relabel.iter_mut().for_each(|x| *x = NONE);
        let mut next = 0u8;
        let mut less = !self.have_best;
        let mut pos = 0;
        self.buf.clear();
        for u in 0..n {
            let ou = self.inv[u];
            for v in u + 1..n {
                let c = self.color[ou * n + self.inv[v]];
                let r = &mut self.relabel[c as usize];
                if *r == NONE {
                    *r = next;
                    next += 1;
                }
                let val = *r;
                if !less {
                    match val.cmp(&self.best[pos]) {
                        std::cmp::Ordering::Greater => return,
                        std::cmp::Ordering::Less => less = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
                self.buf.push(val);
                pos += 1;
            }
        }
        if less {
            std::mem::swap(&mut self.best, &mut self.buf);
            self.have_best = true;
        }
    }
}

/// Traversal of every cycle of F_a + F_b, each starting with an F_a edge.
fn pair_cycles(order: usize, color: &[u8], a: u8, b: u8) -> Vec<Vec<usize>> {
    let partner = |u: usize, c: u8| (0..order).find(|&v| v != u && color[u * order + v] == c).expect("perfect matching");
    let mut seen = 0u32;
    let mut cycles = Vec::new();
    for start in 0..order {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut cyc = Vec::new();
        let mut u = start;
        let mut use_a = true;
        loop {
            seen |= 1 << u;
            cyc.push(u);
            u = partner(u, if use_a { a } else { b });
            use_a = !use_a;
            if u == start && use_a {
                break;
            }
        }
        cycles.push(cyc);
    }
    cycles
}

fn canonical_from_colors(order: usize, color: &[u8]) -> CanonicalForm {
    let m = (order - 1) as u8;
    let mut types = BTreeMap::new();
    for a in 0..m {
        for b in a + 1..m {
            types.insert((a, b), pair_cycle_type(order, color, a, b));
        }
    }
    let min_type = types.values().min().expect("at least one pair").clone();
    let mut search = CanonSearch {
        order,
        color,
        best: Vec::new(),
        have_best: false,
        inv: vec![0; order],
        relabel: vec![NONE; order],
        buf: Vec::with_capacity(order * (order - 1) / 2),
    };
    for (&(a, b), t) in &types {
        if *t != min_type {
            continue;
        }
        for (x, y) in [(a, b), (b, a)] {
            let cycles = pair_cycles(order, color, x, y);
            let mut used = vec![false; cycles.len()];
            assign_slots(&min_type, 0, 0, &cycles, &mut used, &mut search);
        }
    }
    CanonicalForm {
        order: order as u8,
        code: search.best,
    }
}

/// Places cycles into the standard slots (lengths in `slots`, consecutive
/// labels), trying every start vertex, and evaluates each full labeling.
fn assign_slots(
    slots: &[u8],
    slot: usize,
    offset: usize,
    cycles: &[Vec<usize>],
    used: &mut Vec<bool>,
    search: &mut CanonSearch<'_>,
) {
    if slot == slots.len() {
        search.evaluate();
        return;
    }
    let len = slots[slot] as usize;
    for ci in 0..cycles.len() {
        if used[ci] || cycles[ci].len() != len {
            continue;
        }
        used[ci] = true;
        // Starting at an even position keeps the first edge in F_a.
        for s in (0..len).step_by(2) {
            for t in 0..len {
                search.inv[offset + t] = cycles[ci][(s + t) % len];
            }
            assign_slots(slots, slot + 1, offset + len, cycles, used, search);
        }
        // Odd starts walk the cycle backwards so the first edge is still F_a.
        for s in (1..len).step_by(2) {
            for t in 0..len {
                search.inv[offset + t] = cycles[ci][(s + len - t) % len];
            }
            assign_slots(slots, slot + 1, offset + len, cycles, used, search);
        }
        used[ci] = false;
    }
}

pub fn canonical_form(f: &OneFactorization) -> CanonicalForm {
    canonical_from_colors(f.order, &f.color)
}

pub fn isomorphic(f: &OneFactorization, g: &OneFactorization) -> bool {
    f.order == g.order && canonical_form(f) == canonical_form(g)
}

// ---------------------------------------------------------------------------
// Enumeration

/// Partitions of `total` into even parts >= 4, parts descending.
fn cycle_types(total: usize) -> Vec<Vec<u8>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let mut p = max.min(rest);
        if p % 2 == 1 {
            p -= 1;
        }
        while p >= 4 {
            cur.push(p as u8);
            go(rest - p, p, cur, out);
            cur.pop();
            p -= 2;
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

struct Completion {
    order: usize,
    color: Vec<u8>,
    /// Bit v of `avail[u]` set when edge uv is still uncolored.
    avail: Vec<u16>,
    /// Partner of vertex 0 in factor c, for factors 2..
    anchors: Vec<usize>,
}

impl Completion {
    /// Coloring with factors 0 and 1 fixed to the standard pair of type `ty`.
    fn standard(order: usize, ty: &[u8]) -> Self {
        let mut c = Self::from_coloring(order, vec![NONE; order * order], Vec::new());
        let mut off = 0;
        for &len in ty {
            let len = len as usize;
            for t in (0..len).step_by(2) {
                c.set(off + t, off + t + 1, 0);
                c.set(off + t + 1, off + (t + 2) % len, 1);
            }
            off += len;
        }
        c.anchors = (1..order).filter(|&v| c.avail[0] >> v & 1 == 1).collect();
        c
    }

    fn set(&mut self, u: usize, v: usize, c: u8) {
        let n = self.order;
        self.color[u * n + v] = c;
        self.color[v * n + u] = c;
        self.avail[u] &= !(1 << v);
        self.avail[v] &= !(1 << u);
    }

    fn unset(&mut self, u: usize, v: usize) {
        let n = self.order;
        self.color[u * n + v] = NONE;
        self.color[v * n + u] = NONE;
        self.avail[u] |= 1 << v;
        self.avail[v] |= 1 << u;
    }

    fn from_coloring(order: usize, color: Vec<u8>, anchors: Vec<usize>) -> Self {
        let mut avail = vec![0u16; order];
        for u in 0..order {
            for v in 0..order {
                if u != v && color[u * order + v] == NONE {
                    avail[u] |= 1 << v;
                }
            }
        }
        Completion {
            order,
            color,
            avail,
            anchors,
        }
    }

    /// Opens factor `k` (color `k + 2`) with its edge at vertex 0 and fills
    /// it, then every factor up to `last`; `leaf` sees each coloring where
    /// factor `last` is complete.
    fn start_factor(&mut self, k: usize, last: usize, leaf: &mut dyn FnMut(&[u8])) {
        let n = self.order;
        let c = (k + 2) as u8;
        if k + 1 == self.anchors.len() {
            // The uncolored edges form the last perfect matching.
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| self.color[u * n + v] == NONE)
                .collect();
            debug_assert_eq!(edges.len(), n / 2);
            for &(u, v) in &edges {
                self.set(u, v, c);
            }
            leaf(&self.color);
            for &(u, v) in &edges {
                self.unset(u, v);
            }
            return;
        }
        let a = self.anchors[k];
        self.set(0, a, c);
        self.fill(k, 1 | 1 << a, last, leaf);
        self.unset(0, a);
    }

    fn fill(&mut self, k: usize, matched: u16, last: usize, leaf: &mut dyn FnMut(&[u8])) {
        let n = self.order;
        let full = ((1u32 << n) - 1) as u16;
        if matched == full {
            if k == last {
                leaf(&self.color);
            } else {
                self.start_factor(k + 1, last, leaf);
            }
            return;
        }
        let u = (!matched).trailing_zeros() as usize;
        let mut cand = self.avail[u] & !matched;
        let rest = full & !matched & !(1 << u);
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            // Every vertex still open in this factor needs an available partner.
            let open = rest & !(1 << v);
            let mut bits = open;
            let mut ok = true;
            while bits != 0 {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.avail[w] & open == 0 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            self.set(u, v, (k + 2) as u8);
            self.fill(k, matched | 1 << u | 1 << v, last, leaf);
            self.unset(u, v);
        }
    }
}

fn min_pair_type(order: usize, color: &[u8]) -> Vec<u8> {
    let m = (order - 1) as u8;
    let mut best: Option<Vec<u8>> = None;
    for a in 0..m {
        for b in a + 1..m {
            let t = pair_cycle_type(order, color, a, b);
            if best.as_ref().is_none_or(|x| t < *x) {
                best = Some(t);
            }
        }
    }
    best.expect("at least one pair")
}

/// One representative per isomorphism class of 1-factorizations of K_2n,
/// sorted by canonical form.
///
/// Every class contains a pair of factors of some cycle type T; fixing that
/// pair to a standard labeling and completing it in every possible way
/// reaches the class. Completions whose least pair type is not T are left to
/// the run for their own least type, and survivors are deduplicated by
/// canonical form.
pub fn enumerate_factorizations(n: usize) -> Result<Vec<OneFactorization>, OneFactError> {
    if !(2..=6).contains(&n) {
        return Err(OneFactError::BadHalfOrder(n));
    }
    let order = 2 * n;
    let mut forms: BTreeSet<CanonicalForm> = BTreeSet::new();
    for ty in cycle_types(order) {
        let mut base = Completion::standard(order, &ty);
        let anchors = base.anchors.clone();
        // Split the search on the completions of the first open factor.
        let mut firsts: Vec<Vec<u8>> = Vec::new();
        base.start_factor(0, 0, &mut |col| firsts.push(col.to_vec()));
        let found: Vec<Vec<CanonicalForm>> = firsts
            .into_par_iter()
            .map(|start| {
                let mut local = HashSet::new();
                let mut leaf = |col: &[u8]| {
                    if min_pair_type(order, col) == ty {
                        local.insert(canonical_from_colors(order, col));
                    }
                };
                if anchors.len() == 1 {
                    leaf(&start);
                } else {
                    let mut c = Completion::from_coloring(order, start, anchors.clone());
                    c.start_factor(1, anchors.len() - 1, &mut leaf);
                }
                local.into_iter().collect()
            })
            .collect();
        for set in found {
            forms.extend(set);
        }
    }
    Ok(forms.iter().map(CanonicalForm::to_factorization).collect())
}

// ---------------------------------------------------------------------------
// Triangle closure

/// Family of subsets of factor indices, as bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureFamily {
    factors: usize,
    members: BTreeSet<u32>,
}

impl ClosureFamily {
    pub fn members(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.members
            .iter()
            .map(|&m| (0..self.factors).filter(|i| m >> i & 1 == 1).collect())
    }

    pub fn bitsets(&self) -> &BTreeSet<u32> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_set(&self, set: &[usize]) -> bool {
        let m = set.iter().fold(0u32, |m, &i| m | 1 << i);
        self.members.contains(&m)
    }

    pub fn contains_all(&self) -> bool {
        self.members.contains(&((1u32 << self.factors) - 1))
    }
}

/// For every triangle of K_2n, the three factors holding its sides.
pub fn t0_triples(f: &OneFactorization) -> ClosureFamily {
    let n = f.order;
    let mut members = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                let m = 1u32 << f.factor_of(u, v) | 1 << f.factor_of(u, w) | 1 << f.factor_of(v, w);
                debug_assert_eq!(m.count_ones(), 3);
                members.insert(m);
            }
        }
    }
    ClosureFamily {
        factors: n - 1,
        members,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub family: ClosureFamily,
    pub contains_all: bool,
    /// Rounds of joining performed before stopping.
    pub depth: usize,
}

/// Repeatedly adds the union of any two members sharing at least two
/// factors; stops at a fixpoint or as soon as the full factor set appears.
pub fn closure(f: &OneFactorization) -> ClosureResult {
    let mut family = t0_triples(f);
    let full = (1u32 << family.factors) - 1;
    let mut depth = 0;
    while !family.members.contains(&full) {
        let current: Vec<u32> = family.members.iter().copied().collect();
        let mut added = Vec::new();
        for (i, &a) in current.iter().enumerate() {
            for &b in &current[i + 1..] {
                let j = a | b;
                if (a & b).count_ones() >= 2 && !family.members.contains(&j) {
                    added.push(j);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        depth += 1;
        family.members.extend(added);
    }
    let contains_all = family.members.contains(&full);
    ClosureResult {
        family,
        contains_all,
        depth,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureEntry {
    pub index: usize,
    pub contains_all: bool,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub entries: Vec<ClosureEntry>,
    pub max_depth: usize,
    pub failures: usize,
}

impl ClosureReport {
    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }
}

/// Runs the closure on every factorization of a catalog.
pub fn closure_report(classes: &[OneFactorization]) -> ClosureReport {
    let entries: Vec<ClosureEntry> = classes
        .par_iter()
        .enumerate()
        .map(|(index, f)| {
            let c = closure(f);
            ClosureEntry {
                index,
                contains_all: c.contains_all,
                depth: c.depth,
            }
        })
        .collect();
    ClosureReport {
        max_depth: entries.iter().map(|e| e.depth).max().unwrap_or(0),
        failures: entries.iter().filter(|e| !e.contains_all).count(),
        entries,
    }
}

/// Enumerates the 1-factorizations of K_10 and closes each of them.
pub fn verify_lemma_computer() -> ClosureReport {
    let classes = enumerate_factorizations(5).expect("n = 5 is in range");
    closure_report(&classes)
}

// ---------------------------------------------------------------------------
// Embeddings

/// Images of the vertices (an arc) and of the factors (focus points).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub vertices: Vec<ProjPoint>,
    pub factors: Vec<ProjPoint>,
}

impl Embedding {
    /// Whether all focus points lie on one line.
    pub fn is_linear(&self, plane: &Plane) -> bool {
        collinear_set(plane, &self.factors)
    }

    /// Checks injectivity, the arc condition and factor incidences.
    pub fn is_valid(&self, plane: &Plane, f: &OneFactorization) -> bool {
        let mut all: Vec<ProjPoint> = self.vertices.iter().chain(&self.factors).copied().collect();
        all.sort();
        all.dedup();
        if all.len() != self.vertices.len() + self.factors.len() {
            return false;
        }
        let v = &self.vertices;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                for k in j + 1..v.len() {
                    if plane.collinear(&v[i], &v[j], &v[k]) {
                        return false;
                    }
                }
            }
        }
        f.factors().iter().zip(&self.factors).all(|(fac, p)| {
            fac.edges()
                .all(|(a, b)| plane.collinear(&v[a], &v[b], p))
        })
    }
}

pub(crate) fn collinear_set(plane: &Plane, pts: &[ProjPoint]) -> bool {
    if pts.len() <= 2 {
        return true;
    }
    let l = plane.line_through(&pts[0], &pts[1]).expect("distinct");
    pts[2..].iter().all(|p| plane.incident(p, &l))
}

/// The standard frame (0,0,1), (0,1,1), (1,0,1), (1,1,1).
pub fn standard_frame(plane: &Plane) -> [ProjPoint; 4] {
    let q = plane.order();
    // affine index x * q + y
    [0, 1, q, q + 1].map(|i| plane.point_at(i))
}

struct EmbedState<'a> {
    plane: Plane,
    f: &'a OneFactorization,
    vertices: Vec<ProjPoint>,
    factors: Vec<Option<ProjPoint>>,
    /// For factors without a point yet, one known line through it.
    pending: Vec<Option<ProjLine>>,
    limit: Option<usize>,
    out: Vec<Embedding>,
}

impl EmbedState<'_> {
    /// Adds vertex `p` as the next vertex; returns the undo log on success.
    fn try_place(&mut self, p: ProjPoint) -> Option<(Vec<usize>, Vec<usize>)> {
        let plane = self.plane;
        let v = self.vertices.len();
        if self.vertices.contains(&p) || self.factors.iter().flatten().any(|x| *x == p) {
            return None;
        }
        for i in 0..v {
            for j in i + 1..v {
                if plane.collinear(&self.vertices[i], &self.vertices[j], &p) {
                    return None;
                }
            }
        }
        let mut set_points = Vec::new();
        let mut set_lines = Vec::new();
        let undo = |s: &mut Self, pts: &[usize], lines: &[usize]| {
            for &c in pts {
                s.factors[c] = None;
            }
            for &c in lines {
                s.pending[c] = None;
            }
        };
        for u in 0..v {
            let c = self.f.factor_of(u, v);
            let line = plane.line_through(&self.vertices[u], &p).expect("distinct");
            if let Some(fp) = self.factors[c] {
                if !plane.incident(&fp, &line) {
                    undo(self, &set_points, &set_lines);
                    return None;
                }
            } else if let Some(other) = self.pending[c] {
                let fp = plane.meet(&line, &other).expect("distinct secants");
                let clash = self.vertices.contains(&fp)
                    || fp == p
                    || self.factors.iter().flatten().any(|x| *x == fp);
                if clash {
                    undo(self, &set_points, &set_lines);
                    return None;
                }
                self.factors[c] = Some(fp);
                set_points.push(c);
            } else {
                self.pending[c] = Some(line);
                set_lines.push(c);
            }
        }
        self.vertices.push(p);
        Some((set_points, set_lines))
    }

    fn remove_last(&mut self, log: (Vec<usize>, Vec<usize>)) {
        self.vertices.pop();
        for c in log.0 {
            self.factors[c] = None;
        }
        for c in log.1 {
            self.pending[c] = None;
        }
    }

    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.out.len() >= l)
    }

    fn search(&mut self) {
        if self.done() {
            return;
        }
        let v = self.vertices.len();
        if v == self.f.order() {
            let factors: Vec<ProjPoint> = self.factors.iter().map(|x| x.expect("all factors placed")).collect();
            self.out.push(Embedding {
                vertices: self.vertices.clone(),
                factors,
            });
            return;
        }
        // A known focus point and a placed neighbour pin v to a line.
        let plane = self.plane;
        let constraint = (0..v).find_map(|u| {
            self.factors[self.f.factor_of(u, v)]
                .map(|fp| plane.line_through(&self.vertices[u], &fp).expect("distinct"))
        });
        let candidates: Vec<ProjPoint> = match constraint {
            Some(l) => plane.points_on(&l),
            None => plane.points().collect(),
        };
        for p in candidates {
            if let Some(log) = self.try_place(p) {
                self.search();
                self.remove_last(log);
                if self.done() {
                    return;
                }
            }
        }
    }
}

/// Embeddings of `f` in PG(2, q) with vertices 0..3 sent to the standard
/// frame. Every embedding is projectively equivalent to one of these.
pub fn embed_search(f: &OneFactorization, spec: FieldSpec, limit: Option<usize>) -> Vec<Embedding> {
    let plane = Plane::new(spec);
    let m = f.order() - 1;
    let mut st = EmbedState {
        plane,
        f,
        vertices: Vec::new(),
        factors: vec![None; m],
        pending: vec![None; m],
        limit,
        out: Vec::new(),
    };
    for p in standard_frame(&plane).iter().take(f.order()) {
        if st.try_place(*p).is_none() {
            return Vec::new();
        }
    }
    st.search();
    st.out
}

// ---------------------------------------------------------------------------
// Classification driver

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEntry {
    pub n: usize,
    pub index: usize,
    pub catalog_line: String,
    pub contains_all: bool,
    /// `None` when the closure already forces collinear focus points.
    pub embeddings: Option<usize>,
    pub nonlinear_embeddings: usize,
    /// The search stopped at the budget rather than exhausting the space.
    pub budget_hit: bool,
}

/// A projective class of arcs admitting a non-linear minimum blocking set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonlinearClass {
    pub k: usize,
    pub canonical_arc: Vec<ProjPoint>,
    /// Factorization classes (by index within their n) that produced it.
    pub sources: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub q: usize,
    pub max_k: usize,
    pub entries: Vec<ClassEntry>,
    pub nonlinear: Vec<NonlinearClass>,
    pub exhaustive: bool,
}

type Source = (usize, usize);

/// For each K_2n class with 6 <= 2n <= max_k, either the closure forces
/// collinear focus points or every embedding is searched and its focus
/// points tested for collinearity. Non-linear arcs are grouped by projective
/// canonical form.
pub fn classify_ghf(spec: FieldSpec, max_k: usize, budget: Option<usize>) -> Result<ClassificationReport, OneFactError> {
    let plane = Plane::new(spec);
    let mut entries = Vec::new();
    // (k, canonical arc) -> (catalog index, embedding index) of each source.
    let mut groups: BTreeMap<(usize, Vec<ProjPoint>), Vec<Source>> = BTreeMap::new();
    for n in 3..=max_k / 2 {
        let classes = enumerate_factorizations(n)?;
        let results: Vec<(ClassEntry, Vec<Vec<ProjPoint>>)> = classes
            .par_iter()
            .enumerate()
            .map(|(index, f)| {
                let c = closure(f);
                let mut entry = ClassEntry {
                    n,
                    index,
                    catalog_line: f.to_catalog_line(),
                    contains_all: c.contains_all,
                    embeddings: None,
                    nonlinear_embeddings: 0,
                    budget_hit: false,
                };
                let mut arcs = Vec::new();
                if !c.contains_all {
                    let found = embed_search(f, spec, budget);
                    entry.budget_hit = budget.is_some_and(|b| found.len() >= b);
                    entry.embeddings = Some(found.len());
                    for e in found.iter().filter(|e| !e.is_linear(&plane)) {
                        entry.nonlinear_embeddings += 1;
                        arcs.push(projective_canonical_form(&plane, &e.vertices));
                    }
                    arcs.sort();
                    arcs.dedup();
                }
                (entry, arcs)
            })
            .collect();
        for (entry, arcs) in results {
            for a in arcs {
                groups.entry((2 * n, a)).or_default().push((n, entry.index));
            }
            entries.push(entry);
        }
    }
    let exhaustive = entries.iter().all(|e| !e.budget_hit);
    Ok(ClassificationReport {
        q: spec.order(),
        max_k,
        entries,
        nonlinear: groups
            .into_iter()
            .map(|((k, canonical_arc), sources)| NonlinearClass {
                k,
                canonical_arc,
                sources,
            })
            .collect(),
        exhaustive,
    })
}
