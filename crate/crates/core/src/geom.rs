//! Projective geometry over GF(q): points of P^1 and P^{k-1}, the normal
//! rational curve, conics and their nuclei, and exhaustive arc and
//! hyperoval searches in PG(2,q).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::gf::{Field, FieldElement, FieldSpec};
use crate::linalg::MatrixGF;
use crate::{Error, Result};

/// A point of the projective line P^1 = GF(q) plus a point at infinity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EvalPoint {
    Finite(FieldElement),
    Infinity,
}

impl EvalPoint {
    /// Homogeneous coordinates [x, y] with t = y/x and infinity = [0, 1].
    pub fn homogeneous(self) -> [FieldElement; 2] {
        match self {
            EvalPoint::Finite(t) => [FieldElement(1), t],
            EvalPoint::Infinity => [FieldElement(0), FieldElement(1)],
        }
    }
}

impl std::fmt::Display for EvalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalPoint::Finite(t) => write!(f, "{t}"),
            EvalPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// The q+1 points of P^1 in the fixed order 0, 1, ..., q-1, infinity.
pub fn p1_points(field: &FieldSpec) -> Vec<EvalPoint> {
    let mut pts: Vec<EvalPoint> = field.elements().map(EvalPoint::Finite).collect();
    pts.push(EvalPoint::Infinity);
    pts
}

/// A point of P^{k-1} in homogeneous coordinates, normalized so the first
/// nonzero coordinate is 1. Equality of normalized points is byte equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    /// Normalize a nonzero coordinate vector. Panics on the zero vector.
    pub fn new(field: &FieldSpec, coords: Vec<FieldElement>) -> ProjPoint {
        let first = coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("projective point must be a nonzero vector");
        let mut coords = coords;
        let lead = coords[first];
        if lead != field.one() {
            let inv = field.inv(lead);
            for c in coords.iter_mut() {
                *c = field.mul(inv, *c);
            }
        }
        ProjPoint { coords }
    }

    pub fn from_indices(field: &FieldSpec, coords: &[u64]) -> ProjPoint {
        ProjPoint::new(field, coords.iter().map(|&i| field.element(i)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn bytes(&self) -> Vec<u8> {
        self.coords.iter().map(|c| c.0).collect()
    }
}

/// Point of the normal rational curve in P^{k-1}: [1, t, ..., t^{k-1}] for
/// finite t and [0, ..., 0, 1] at infinity.
pub fn nrc_point(field: &FieldSpec, k: usize, t: EvalPoint) -> Result<ProjPoint> {
    if k < 2 || k as u64 > field.q() {
        return Err(Error::BadDimension(format!(
            "normal rational curve needs 2 <= k <= q, got k={k} over GF({})",
            field.q()
        )));
    }
    let [x, y] = t.homogeneous();
    Ok(nrc_point_homogeneous(field, k, x, y))
}

/// Veronese image of [x, y]: [x^{k-1}, x^{k-2} y, ..., y^{k-1}].
pub(crate) fn nrc_point_homogeneous(
    field: &FieldSpec,
    k: usize,
    x: FieldElement,
    y: FieldElement,
) -> ProjPoint {
    let mut coords = vec![FieldElement(1); k];
    // coords[i] = x^{k-1-i} y^i
    let mut xp = FieldElement(1);
    for i in (0..k).rev() {
        coords[i] = xp;
        xp = field.mul(xp, x);
    }
    let mut yp = FieldElement(1);
    for (i, c) in coords.iter_mut().enumerate() {
        if i > 0 {
            yp = field.mul(yp, y);
        }
        *c = field.mul(*c, yp);
    }
    ProjPoint::new(field, coords)
}

/// The q+1 points of the standard normal rational curve, in the fixed
/// P^1 order.
pub fn nrc_points(field: &Field, k: usize) -> Result<Vec<ProjPoint>> {
    p1_points(field)
        .into_iter()
        .map(|t| nrc_point(field, k, t))
        .collect()
}

/// True when three points of PG(2,q) lie on a common line.
pub fn collinear(field: &FieldSpec, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> bool {
    assert!(p1.dim() == 3 && p2.dim() == 3 && p3.dim() == 3, "collinear needs PG(2,q) points");
    det3(field, p1.coords(), p2.coords(), p3.coords()).is_zero()
}

fn det3(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement], c: &[FieldElement]) -> FieldElement {
    let m01 = field.sub(field.mul(b[1], c[2]), field.mul(b[2], c[1]));
    let m11 = field.sub(field.mul(b[0], c[2]), field.mul(b[2], c[0]));
    let m21 = field.sub(field.mul(b[0], c[1]), field.mul(b[1], c[0]));
    field.add(
        field.sub(field.mul(a[0], m01), field.mul(a[1], m11)),
        field.mul(a[2], m21),
    )
}

/// Cross product; the line through two distinct points, or the point on
/// two distinct lines.
pub fn cross(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> [FieldElement; 3] {
    [
        field.sub(field.mul(a[1], b[2]), field.mul(a[2], b[1])),
        field.sub(field.mul(a[2], b[0]), field.mul(a[0], b[2])),
        field.sub(field.mul(a[0], b[1]), field.mul(a[1], b[0])),
    ]
}

/// No three of the given PG(2,q) points are collinear.
pub fn is_arc(field: &FieldSpec, points: &[ProjPoint]) -> bool {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for l in j + 1..points.len() {
                if collinear(field, &points[i], &points[j], &points[l]) {
                    return false;
                }
            }
        }
    }
    true
}

/// A conic a x^2 + b y^2 + c z^2 + d xy + e yz + f xz in PG(2,q),
/// normalized so the first nonzero coefficient is 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Conic {
    coeffs: [FieldElement; 6],
    degenerate: bool,
}

impl Conic {
    /// Normalize the coefficient vector and decide degeneracy exactly.
    ///
    /// A conic is degenerate exactly when it factors into lines; over a
    /// finite field that happens exactly when its rational point count is
    /// not q+1 or its q+1 points all lie on one line.
    pub fn new(field: &FieldSpec, coeffs: [FieldElement; 6]) -> Conic {
        let first = coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("conic coefficients must not all vanish");
        let mut coeffs = coeffs;
        if coeffs[first] != field.one() {
            let inv = field.inv(coeffs[first]);
            for c in coeffs.iter_mut() {
                *c = field.mul(inv, *c);
            }
        }
        let mut conic = Conic {
            coeffs,
            degenerate: false,
        };
        conic.degenerate = conic.compute_degenerate(field);
        conic
    }

    pub fn coefficients(&self) -> &[FieldElement; 6] {
        &self.coeffs
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn evaluate(&self, field: &FieldSpec, p: &ProjPoint) -> FieldElement {
        let [a, b, c, d, e, ff] = self.coeffs;
        let (x, y, z) = (p.coords()[0], p.coords()[1], p.coords()[2]);
        let mut acc = field.mul(field.mul(a, x), x);
        acc = field.add(acc, field.mul(field.mul(b, y), y));
        acc = field.add(acc, field.mul(field.mul(c, z), z));
        acc = field.add(acc, field.mul(field.mul(d, x), y));
        acc = field.add(acc, field.mul(field.mul(e, y), z));
        acc = field.add(acc, field.mul(field.mul(ff, x), z));
        acc
    }

    /// All rational points, in the fixed PG(2,q) point order.
    pub fn points(&self, field: &Field) -> Vec<ProjPoint> {
        pg2_points(field)
            .into_iter()
            .filter(|p| self.evaluate(field, p).is_zero())
            .collect()
    }

    fn compute_degenerate(&self, field: &FieldSpec) -> bool {
        let pts = self.points_raw(field);
        if pts.len() != field.q() as usize + 1 {
            return true;
        }
        // q+1 points: degenerate only as a repeated line, i.e. all collinear.
        let line = cross(field, &pts[0], &pts[1]);
        pts[2..]
            .iter()
            .all(|p| dot3(field, &line, p).is_zero())
    }

    fn points_raw(&self, field: &FieldSpec) -> Vec<[FieldElement; 3]> {
        let mut out = Vec::new();
        for p in pg2_points_raw(field) {
            let pp = ProjPoint {
                coords: p.to_vec(),
            };
            if self.evaluate(field, &pp).is_zero() {
                out.push(p);
            }
        }
        out
    }
}

fn dot3(field: &FieldSpec, a: &[FieldElement; 3], p: &[FieldElement; 3]) -> FieldElement {
    field.add(
        field.add(field.mul(a[0], p[0]), field.mul(a[1], p[1])),
        field.mul(a[2], p[2]),
    )
}

/// The q^2 + q + 1 points of PG(2,q) in a fixed deterministic order.
pub fn pg2_points(field: &Field) -> Vec<ProjPoint> {
    pg2_points_raw(field)
        .into_iter()
        .map(|c| ProjPoint { coords: c.to_vec() })
        .collect()
}

fn pg2_points_raw(field: &FieldSpec) -> Vec<[FieldElement; 3]> {
    let mut pts = Vec::with_capacity((field.q() * field.q() + field.q() + 1) as usize);
    pts.push([FieldElement(0), FieldElement(0), FieldElement(1)]);
    for z in field.elements() {
        pts.push([FieldElement(0), FieldElement(1), z]);
    }
    for y in field.elements() {
        for z in field.elements() {
            pts.push([FieldElement(1), y, z]);
        }
    }
    pts
}

/// The unique conic through five points, no three collinear.
///
/// Solves the 5 x 6 homogeneous system row by row; the solution space must
/// be one dimensional, and the resulting conic is nondegenerate.
pub fn conic_through_five(field: &Field, points: &[ProjPoint]) -> Result<Conic> {
    assert_eq!(points.len(), 5, "exactly five points determine a conic");
    assert!(points.iter().all(|p| p.dim() == 3));
    for i in 0..5 {
        for j in i + 1..5 {
            if points[i] == points[j] {
                return Err(Error::DegeneratePosition);
            }
            for l in j + 1..5 {
                if collinear(field, &points[i], &points[j], &points[l]) {
                    return Err(Error::DegeneratePosition);
                }
            }
        }
    }
    let rows: Vec<Vec<FieldElement>> = points
        .iter()
        .map(|p| {
            let (x, y, z) = (p.coords()[0], p.coords()[1], p.coords()[2]);
            vec![
                field.mul(x, x),
                field.mul(y, y),
                field.mul(z, z),
                field.mul(x, y),
                field.mul(y, z),
                field.mul(x, z),
            ]
        })
        .collect();
    let system = MatrixGF::from_rows(&field, &rows);
    if system.rank() != 5 {
        return Err(Error::RankDeficient);
    }
    let ns = system.null_space_basis().map_err(|_| Error::RankDeficient)?;
    debug_assert_eq!(ns.rows(), 1);
    let coeffs: [FieldElement; 6] = std::array::from_fn(|i| ns.get(0, i));
    let conic = Conic::new(field, coeffs);
    debug_assert!(!conic.is_degenerate(), "five points in general position span a smooth conic");
    Ok(conic)
}

/// Nucleus of a nondegenerate conic in characteristic two: the common
/// point of all tangent lines, where every partial derivative vanishes.
/// For a x^2 + b y^2 + c z^2 + d xy + e yz + f xz this is [e : f : d].
pub fn nucleus(field: &FieldSpec, conic: &Conic) -> Result<ProjPoint> {
    if !field.has_char_two() {
        return Err(Error::OddCharacteristic);
    }
    if conic.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let [_, _, _, d, e, f] = *conic.coefficients();
    // d = e = f = 0 would make the form a perfect square, hence degenerate.
    Ok(ProjPoint::new(field, vec![e, f, d]))
}

/// Order of PGL_3(q).
pub fn pgl3_order(q: u64) -> u64 {
    let q3 = q * q * q;
    ((q3 - 1) * (q3 - q) * (q3 - q * q) / (q - 1)) as u64
}

/// Incidence tables of PG(2,q) with points indexed in the fixed order,
/// plus per-pair secant-line masks for arc backtracking. Supports q <= 11
/// (point count <= 128 so masks fit in a u128).
pub(crate) struct PlaneScan {
    pub field: Field,
    pub points: Vec<[FieldElement; 3]>,
    pub n_points: usize,
    index: HashMap<[u8; 3], u32>,
    line_masks: Vec<u128>,
    line_of_pair: Vec<u32>,
}

impl PlaneScan {
    pub fn new(field: &Field) -> Result<PlaneScan> {
        let points = pg2_points_raw(field);
        let n = points.len();
        if n > 128 {
            return Err(Error::TooLarge(format!(
                "PG(2,{}) has {n} points; masks support at most 128",
                field.q()
            )));
        }
        let index: HashMap<[u8; 3], u32> = points
            .iter()
            .enumerate()
            .map(|(i, p)| ([p[0].0, p[1].0, p[2].0], i as u32))
            .collect();
        // Lines have the same normalized coordinate representatives as points.
        let mut line_index: HashMap<[u8; 3], u32> = HashMap::new();
        let mut line_masks = Vec::with_capacity(n);
        for (i, l) in points.iter().enumerate() {
            let mut mask = 0u128;
            for (j, p) in points.iter().enumerate() {
                if dot3(field, l, p).is_zero() {
                    mask |= 1 << j;
                }
            }
            line_index.insert([l[0].0, l[1].0, l[2].0], i as u32);
            line_masks.push(mask);
        }
        let mut line_of_pair = vec![u32::MAX; n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let l = cross(field, &points[i], &points[j]);
                let lp = ProjPoint::new(field, l.to_vec());
                let key = [lp.coords()[0].0, lp.coords()[1].0, lp.coords()[2].0];
                line_of_pair[i * n + j] = line_index[&key];
            }
        }
        Ok(PlaneScan {
            field: field.clone(),
            points,
            n_points: n,
            index,
            line_masks,
            line_of_pair,
        })
    }

    pub fn point_index(&self, p: &ProjPoint) -> u32 {
        let c = p.coords();
        self.index[&[c[0].0, c[1].0, c[2].0]]
    }

    pub fn proj_point(&self, i: u32) -> ProjPoint {
        ProjPoint {
            coords: self.points[i as usize].to_vec(),
        }
    }

    /// Mask of all points on the secant through two distinct point indices.
    #[inline]
    pub fn secant_mask(&self, i: u32, j: u32) -> u128 {
        self.line_masks[self.line_of_pair[i as usize * self.n_points + j as usize] as usize]
    }

    /// Mask with one bit per plane point.
    pub fn full_mask(&self) -> u128 {
        if self.n_points == 128 {
            u128::MAX
        } else {
            (1u128 << self.n_points) - 1
        }
    }
}

/// Exhaustive hyperoval census in PG(2,q), q in {2, 4, 8}.
///
/// All (q+2)-arcs containing the standard frame e1, e2, e3, [1,1,1] are
/// found by backtracking; since PGL_3(q) is simply transitive on ordered
/// frames and any four points of an arc form a frame, the total count is
/// `frame_fixed * |PGL_3(q)| / ((q+2)(q+1)q(q-1))`.
///
/// Every frame-fixed representative is verified to be a conic plus its
/// nucleus; hyperconic-ness is invariant under projectivities, so this
/// decides the property for all hyperovals.
pub fn hyperoval_census(field: &Field) -> Result<(u64, bool)> {
    if !field.has_char_two() {
        return Err(Error::OddCharacteristic);
    }
    if field.q() >= 16 {
        return Err(Error::TooLarge(format!(
            "hyperoval census is restricted to q in {{2, 4, 8}}, got q={}",
            field.q()
        )));
    }
    let q = field.q();
    let arcs = frame_fixed_hyperovals(field)?;
    let frame_fixed = arcs.len() as u64;
    let numerator = frame_fixed as u128 * pgl3_order(q) as u128;
    let frames_per_hyperoval = ((q + 2) * (q + 1) * q * (q - 1)) as u128;
    assert_eq!(
        numerator % frames_per_hyperoval,
        0,
        "orbit count must divide exactly"
    );
    let count = (numerator / frames_per_hyperoval) as u64;
    let all_hyperconic = arcs.iter().all(|arc| is_hyperconic(field, arc));
    Ok((count, all_hyperconic))
}

/// All (q+2)-arcs containing the standard frame, as point sets.
pub fn frame_fixed_hyperovals(field: &Field) -> Result<Vec<Vec<ProjPoint>>> {
    let plane = PlaneScan::new(field)?;
    let target = field.q() as usize + 2;
    let mut out = Vec::new();
    arc_dfs(&plane, &frame_indices(&plane), target, None, &mut |arc| {
        out.push(arc.iter().map(|&i| plane.proj_point(i)).collect())
    });
    Ok(out)
}

/// All n-arcs of PG(2,q) as point sets, by raw backtracking over every
/// point subset. Feasible only for very small planes; used as an
/// assumption-free cross-check of the frame-fixed search.
pub fn all_arcs_raw(field: &Field, n: usize) -> Result<u64> {
    let plane = PlaneScan::new(field)?;
    let mut count = 0u64;
    arc_dfs(&plane, &[], n, None, &mut |_| count += 1);
    Ok(count)
}

/// Check that no complete m-arc exists for any m in `sizes`: every m-arc
/// (equivalently, every m-arc containing the standard frame) admits an
/// extension point.
pub fn arcs_extendable(field: &Field, sizes: std::ops::RangeInclusive<usize>) -> Result<bool> {
    let plane = PlaneScan::new(field)?;
    let max = *sizes.end();
    let mut ok = true;
    arc_dfs(&plane, &frame_indices(&plane), max + 1, Some((&sizes, &mut ok)), &mut |_| {});
    Ok(ok)
}

fn frame_indices(plane: &PlaneScan) -> Vec<u32> {
    let field = &plane.field;
    let mut idx: Vec<u32> = [
        ProjPoint::from_indices(field, &[1, 0, 0]),
        ProjPoint::from_indices(field, &[0, 1, 0]),
        ProjPoint::from_indices(field, &[0, 0, 1]),
        ProjPoint::from_indices(field, &[1, 1, 1]),
    ]
    .iter()
    .map(|p| plane.point_index(p))
    .collect();
    idx.sort_unstable();
    idx
}

/// Depth-first arc extension. `seed` points are fixed in the arc; the
/// search adds the remaining points in increasing index order so each
/// point set is visited exactly once. When `extendability` is given,
/// every visited arc whose size falls in the range is checked for the
/// existence of an extension point.
fn arc_dfs(
    plane: &PlaneScan,
    seed: &[u32],
    target: usize,
    mut extendability: Option<(&std::ops::RangeInclusive<usize>, &mut bool)>,
    visit: &mut impl FnMut(&[u32]),
) {
    let mut chosen: Vec<u32> = seed.to_vec();
    let mut excluded = 0u128;
    for &i in seed {
        excluded |= 1 << i;
    }
    let mut forbidden = excluded;
    for a in 0..seed.len() {
        for b in a + 1..seed.len() {
            forbidden |= plane.secant_mask(seed[a], seed[b]);
        }
    }
    recurse(plane, &mut chosen, forbidden, 0, target, &mut extendability, visit);

    fn recurse(
        plane: &PlaneScan,
        chosen: &mut Vec<u32>,
        forbidden: u128,
        start: u32,
        target: usize,
        extendability: &mut Option<(&std::ops::RangeInclusive<usize>, &mut bool)>,
        visit: &mut impl FnMut(&[u32]),
    ) {
        if let Some((range, ok)) = extendability {
            if range.contains(&chosen.len()) && plane.full_mask() & !forbidden == 0 {
                **ok = false;
            }
        }
        if chosen.len() == target {
            visit(chosen);
            return;
        }
        for idx in start..plane.n_points as u32 {
            if forbidden >> idx & 1 == 1 {
                continue;
            }
            let mut next_forbidden = forbidden | 1 << idx;
            for &c in chosen.iter() {
                next_forbidden |= plane.secant_mask(c, idx);
            }
            chosen.push(idx);
            recurse(plane, chosen, next_forbidden, idx + 1, target, extendability, visit);
            chosen.pop();
        }
    }
}

/// True when the point set is a conic plus its nucleus.
pub fn is_hyperconic(field: &Field, points: &[ProjPoint]) -> bool {
    let q = field.q() as usize;
    if points.len() != q + 2 || !field.has_char_two() {
        return false;
    }
    if q == 2 {
        // Too few points to pin a conic by five of them: try every
        // nondegenerate conic directly.
        let mut sorted: Vec<&ProjPoint> = points.iter().collect();
        sorted.sort();
        for conic in all_conics(field) {
            if conic.is_degenerate() {
                continue;
            }
            let mut hyper = conic.points(field);
            hyper.push(nucleus(field, &conic).expect("nondegenerate, char 2"));
            hyper.sort();
            if hyper.iter().collect::<Vec<_>>() == sorted {
                return true;
            }
        }
        return false;
    }
    for (i, candidate_nucleus) in points.iter().enumerate() {
        let rest: Vec<ProjPoint> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let Ok(conic) = conic_through_five(field, &rest[..5]) else {
            continue;
        };
        if rest.iter().all(|p| conic.evaluate(field, p).is_zero())
            && nucleus(field, &conic).as_ref() == Ok(candidate_nucleus)
        {
            return true;
        }
    }
    false
}

/// All conics of PG(2,q) up to scalar, as normalized coefficient vectors.
fn all_conics(field: &Field) -> Vec<Conic> {
    let q = field.q();
    let mut out = Vec::new();
    for first in 0..6 {
        let free = 5 - first;
        let mut count = 1u64;
        for _ in 0..free {
            count *= q;
        }
        for mut idx in 0..count {
            let mut coeffs = [FieldElement(0); 6];
            coeffs[first] = FieldElement(1);
            for c in coeffs.iter_mut().skip(first + 1) {
                *c = field.element(idx % q);
                idx /= q;
            }
            out.push(Conic::new(field, coeffs));
        }
    }
    out
}

/// Number of nondegenerate conics in PG(2,q), by exhausting all
/// coefficient classes; an independent oracle for hyperoval counts.
pub fn count_nondegenerate_conics(field: &Field) -> u64 {
    let q = field.q();
    let classes: Vec<(usize, u64)> = (0..6)
        .map(|first| {
            let mut count = 1u64;
            for _ in 0..5 - first {
                count *= q;
            }
            (first, count)
        })
        .collect();
    classes
        .into_par_iter()
        .map(|(first, count)| {
            let mut nondeg = 0u64;
            for mut idx in 0..count {
                let mut coeffs = [FieldElement(0); 6];
                coeffs[first] = FieldElement(1);
                for c in coeffs.iter_mut().skip(first + 1) {
                    *c = field.element(idx % q);
                    idx /= q;
                }
                if !Conic::new(field, coeffs).is_degenerate() {
                    nondeg += 1;
                }
            }
            nondeg
        })
        .sum()
}

/// Order of the subgroup of PGL_3(q) stabilizing an arc setwise, found by
/// explicit search: each ordered 4-tuple of arc points determines the
/// unique projectivity sending a base frame of the arc to it, and the
/// stabilizer consists of the ones that preserve the arc.
pub fn arc_stabilizer_order(field: &Field, arc: &[ProjPoint]) -> u64 {
    assert!(arc.len() >= 4);
    let base = frame_matrix(field, &arc[0], &arc[1], &arc[2], &arc[3]);
    let base_inv = base.inverse().expect("arc points are in general position");
    let arc_set: std::collections::HashSet<Vec<u8>> = arc.iter().map(|p| p.bytes()).collect();
    let mut order = 0u64;
    let m = arc.len();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    let target = frame_matrix(field, &arc[a], &arc[b], &arc[c], &arc[d]);
                    let g = target.mul(&base_inv);
                    let stabilizes = arc.iter().all(|p| {
                        let image = ProjPoint::new(field, g.mul_vec(p.coords()));
                        arc_set.contains(&image.bytes())
                    });
                    if stabilizes {
                        order += 1;
                    }
                }
            }
        }
    }
    order
}

/// The matrix sending e1, e2, e3, [1,1,1] to the four given points (in
/// general position), unique up to scalar.
fn frame_matrix(
    field: &Field,
    p0: &ProjPoint,
    p1: &ProjPoint,
    p2: &ProjPoint,
    p3: &ProjPoint,
) -> MatrixGF {
    let cols = MatrixGF::from_fn(&field, 3, 3, |r, c| {
        [p0, p1, p2][c].coords()[r]
    });
    let lambda = cols
        .inverse()
        .expect("first three points are not collinear")
        .mul_vec(p3.coords());
    MatrixGF::from_fn(&field, 3, 3, |r, c| {
        field.mul(lambda[c], [p0, p1, p2][c].coords()[r])
    })
}
