//! Construction and recognition of generalized Reed-Solomon codes:
//! generator matrices from evaluation points and column multipliers, dual
//! multipliers, fitting a normal rational curve through k+2 points in
//! general position, hyperconic codes of length q+2, and puncturing.

use itertools::Itertools;

use crate::geom::{conic_through_five, nrc_point_homogeneous, Conic, EvalPoint, ProjPoint};
use crate::gf::{Field, FieldElement};
use crate::linalg::{CodeKey, MatrixGF};
use crate::{Error, Result};

/// Parameters of a GRS generator matrix: dimension k, n pairwise distinct
/// evaluation points on P^1, and n nonzero column multipliers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrsParams {
    k: usize,
    t: Vec<EvalPoint>,
    d: Vec<FieldElement>,
}

impl GrsParams {
    pub fn new(field: &Field, k: usize, t: Vec<EvalPoint>, d: Vec<FieldElement>) -> Result<GrsParams> {
        let n = t.len();
        if d.len() != n {
            return Err(Error::BadDimension(
                "evaluation points and multipliers must have equal length".into(),
            ));
        }
        if n as u64 > field.q() + 1 {
            return Err(Error::OutOfRange(format!(
                "length {n} exceeds q+1 = {}",
                field.q() + 1
            )));
        }
        if k == 0 || k >= n {
            return Err(Error::BadDimension(format!(
                "dimension k={k} must satisfy 1 <= k < n={n}"
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                if t[i] == t[j] {
                    return Err(Error::DuplicateEvalPoint);
                }
            }
        }
        if d.iter().any(|m| m.is_zero()) {
            return Err(Error::ZeroMultiplier);
        }
        Ok(GrsParams { k, t, d })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn eval_points(&self) -> &[EvalPoint] {
        &self.t
    }

    pub fn multipliers(&self) -> &[FieldElement] {
        &self.d
    }
}

/// The k x n generator matrix with column i equal to d_i (1, t_i, ...,
/// t_i^{k-1})^T, and (0, ..., 0, d_i)^T at infinity. Always MDS.
pub fn grs_generator(field: &Field, params: &GrsParams) -> MatrixGF {
    let k = params.k;
    let mut g = MatrixGF::zero(&field, k, params.n());
    for (i, (&t, &d)) in params.t.iter().zip(&params.d).enumerate() {
        let [x, y] = t.homogeneous();
        let col = nrc_point_homogeneous(field, k, x, y);
        for r in 0..k {
            g.set(r, i, field.mul(d, col.coords()[r]));
        }
    }
    g
}

/// Column multipliers of the dual code on the same evaluation points:
/// the rows of the (n-k)-dimensional generator built from the returned
/// multipliers form a basis of the null space of `grs_generator(params)`.
///
/// Finite positions take d_i^{-1} prod_{j != i, t_j finite} (t_i - t_j)^{-1};
/// the infinite position is computed afterwards from all finite ones as
/// -d_i^{-1} sum_{j != i} t_j^{n-2} d_j delta_j.
pub fn dual_multipliers(field: &Field, params: &GrsParams) -> Result<Vec<FieldElement>> {
    let n = params.n();
    let infinite = params
        .t
        .iter()
        .position(|t| matches!(t, EvalPoint::Infinity));
    if infinite.is_some() && n < 3 {
        return Err(Error::OutOfRange(
            "dual multipliers with an infinite point need at least two finite points".into(),
        ));
    }
    let mut delta = vec![FieldElement(0); n];
    for i in 0..n {
        let EvalPoint::Finite(ti) = params.t[i] else {
            continue;
        };
        let mut acc = field.inv(params.d[i]);
        for j in 0..n {
            if j == i {
                continue;
            }
            if let EvalPoint::Finite(tj) = params.t[j] {
                acc = field.mul(acc, field.inv(field.sub(ti, tj)));
            }
        }
        delta[i] = acc;
    }
    if let Some(i) = infinite {
        let mut sum = FieldElement(0);
        for j in 0..n {
            if j == i {
                continue;
            }
            let EvalPoint::Finite(tj) = params.t[j] else {
                unreachable!("evaluation points are distinct");
            };
            let tp = field.pow(tj, (n - 2) as u64);
            sum = field.add(sum, field.mul(tp, field.mul(params.d[j], delta[j])));
        }
        delta[i] = field.neg(field.mul(field.inv(params.d[i]), sum));
    }
    Ok(delta)
}

/// Fit the unique normal rational curve through k+2 points of P^{k-1} in
/// general position (no k of them on a hyperplane).
///
/// Returns an invertible R and parameters p such that the columns of
/// `R * grs_generator(p)` equal the input points in order (projectively);
/// the fitted curve is the image of the standard one under R.
pub fn fit_nrc(field: &Field, points: &[ProjPoint]) -> Result<(MatrixGF, GrsParams)> {
    let k = points
        .first()
        .ok_or_else(|| Error::BadDimension("no points given".into()))?
        .dim();
    if points.len() != k + 2 {
        return Err(Error::BadDimension(format!(
            "fitting a curve in P^{} needs {} points, got {}",
            k - 1,
            k + 2,
            points.len()
        )));
    }
    if k < 2 || k as u64 > field.q() {
        return Err(Error::BadDimension(format!("need 2 <= k <= q, got k={k}")));
    }
    if points.iter().any(|p| p.dim() != k) {
        return Err(Error::BadDimension("points of mixed dimension".into()));
    }
    let m = MatrixGF::from_fn(&field, k, k + 2, |r, c| points[c].coords()[r]);
    if !m.is_mds().map_err(|_| Error::NotGeneralPosition)? {
        return Err(Error::NotGeneralPosition);
    }

    // Reduce to the standard form [I_k | v w]; general position makes all
    // v_i, w_i and all 2x2 minors of [v w] nonzero.
    let first_cols: Vec<usize> = (0..k).collect();
    let r0 = m.select_columns(&first_cols);
    let r0_inv = r0.inverse().expect("first k columns are independent");
    let v = r0_inv.mul_vec(&m.column(k));
    let w = r0_inv.mul_vec(&m.column(k + 1));

    // The 2 x (k+2) matrix [-v^T 1 0; -w^T 0 1] spans the null space of
    // [I_k | v w] and equals G_2(t, d) for t_i = w_i / v_i, t_{k+1} = 0,
    // t_{k+2} = infinity and d = (-v_1, ..., -v_k, 1, 1). The dual
    // multipliers of that matrix generate the same row space as the input.
    let mut t: Vec<EvalPoint> = (0..k)
        .map(|i| EvalPoint::Finite(field.div(w[i], v[i])))
        .collect();
    t.push(EvalPoint::Finite(FieldElement(0)));
    t.push(EvalPoint::Infinity);
    let mut d: Vec<FieldElement> = v.iter().map(|&vi| field.neg(vi)).collect();
    d.push(FieldElement(1));
    d.push(FieldElement(1));
    let dual_params = GrsParams::new(field, 2, t.clone(), d)?;
    let delta = dual_multipliers(field, &dual_params)?;
    let params = GrsParams::new(field, k, t, delta)?;

    let curve_gen = grs_generator(field, &params);
    let base = curve_gen.select_columns(&first_cols);
    let base_inv = base.inverse().expect("curve columns are independent");
    let r = r0.mul(&base_inv);
    debug_assert_eq!(r.mul(&curve_gen).code_key().unwrap(), m.code_key().unwrap());
    Ok((r, params))
}

/// Parameters of a length q+2, dimension 3 generator matrix over a field
/// of characteristic two: a full-conic base together with a nucleus
/// column inserted at a chosen position with a nonzero multiplier.
#[derive(Clone, Debug)]
pub struct HyperconicParams {
    base: GrsParams,
    nucleus_position: usize,
    nucleus_multiplier: FieldElement,
}

impl HyperconicParams {
    pub fn new(
        field: &Field,
        base: GrsParams,
        nucleus_position: usize,
        nucleus_multiplier: FieldElement,
    ) -> Result<HyperconicParams> {
        if !field.has_char_two() {
            return Err(Error::OddCharacteristic);
        }
        if field.e() < 2 {
            return Err(Error::Unsupported("hyperconic codes need q = 2^e, e >= 2".into()));
        }
        if base.k() != 3 || base.n() as u64 != field.q() + 1 {
            return Err(Error::BadDimension(
                "hyperconic base must be a [q+1, 3] parameterization of the full conic".into(),
            ));
        }
        if nucleus_position > base.n() {
            return Err(Error::OutOfRange(format!(
                "nucleus position {} exceeds {}",
                nucleus_position,
                base.n()
            )));
        }
        if nucleus_multiplier.is_zero() {
            return Err(Error::ZeroMultiplier);
        }
        Ok(HyperconicParams {
            base,
            nucleus_position,
            nucleus_multiplier,
        })
    }

    pub fn base(&self) -> &GrsParams {
        &self.base
    }
}

/// Generator matrix of a [q+2, 3] code: the scaled points of the standard
/// conic (the curve [1, t, t^2]) with the conic's nucleus [0, 1, 0]
/// inserted as an extra column. Always MDS.
pub fn hyperconic_generator(field: &Field, params: &HyperconicParams) -> Result<MatrixGF> {
    let base = grs_generator(field, &params.base);
    let n = base.cols() + 1;
    let nucleus_col = [
        FieldElement(0),
        params.nucleus_multiplier,
        FieldElement(0),
    ];
    Ok(MatrixGF::from_fn(&field, 3, n, |r, c| {
        use std::cmp::Ordering::*;
        match c.cmp(&params.nucleus_position) {
            Less => base.get(r, c),
            Equal => nucleus_col[r],
            Greater => base.get(r, c - 1),
        }
    }))
}

/// Delete the last r coordinates of every codeword.
///
/// Errors with [`Error::DimensionDrop`] when the remaining columns no
/// longer have full rank.
pub fn puncture(field: &Field, key: &CodeKey, r: usize) -> Result<CodeKey> {
    let keep: Vec<usize> = (0..key.n().checked_sub(r).ok_or_else(|| {
        Error::OutOfRange(format!("cannot puncture {r} of {} coordinates", key.n()))
    })?)
        .collect();
    puncture_columns(field, key, &keep)
}

/// Puncturing at arbitrary positions: keep exactly the listed coordinates,
/// in order. Convenience companion to [`puncture`].
pub fn puncture_columns(field: &Field, key: &CodeKey, keep: &[usize]) -> Result<CodeKey> {
    if keep.len() < key.k() {
        return Err(Error::OutOfRange(format!(
            "keeping {} coordinates cannot support dimension {}",
            keep.len(),
            key.k()
        )));
    }
    if keep.iter().any(|&c| c >= key.n()) {
        return Err(Error::OutOfRange("column index out of range".into()));
    }
    let m = key.matrix(field)?;
    let sub = m.select_columns(keep);
    sub.code_key().map_err(|_| Error::DimensionDrop)
}

/// The columns of the canonical generator matrix as projective points.
pub fn key_column_points(field: &Field, key: &CodeKey) -> Result<Vec<ProjPoint>> {
    let m = key.matrix(field)?;
    Ok((0..m.cols())
        .map(|c| ProjPoint::new(field, m.column(c)))
        .collect())
}

/// Decide whether a dimension-3 MDS code is generalized Reed-Solomon.
///
/// For n <= q+1 this holds exactly when the n column points lie on a
/// common nondegenerate conic; for n = q+2 (q even) exactly when they form
/// a conic plus its nucleus. A conic is fitted through the first five
/// columns in general position (lexicographic subset scan) and the rest
/// are tested against it.
///
/// Lengths below 5 are refused; at n = 5 any five points in general
/// position lie on conics, so the answer is vacuously true.
pub fn is_grs_dim3(field: &Field, key: &CodeKey) -> Result<bool> {
    if key.k() != 3 {
        return Err(Error::BadDimension(format!(
            "dimension-3 recognition on a dimension-{} code",
            key.k()
        )));
    }
    if key.n() < 5 {
        return Err(Error::TooShort(key.n()));
    }
    let m = key.matrix(field)?;
    if !m.is_mds().map_err(|_| Error::NotMds)? {
        return Err(Error::NotMds);
    }
    let points = key_column_points(field, key)?;
    if key.n() as u64 <= field.q() + 1 {
        Ok(arc_on_common_conic(field, &points).is_some())
    } else if key.n() as u64 == field.q() + 2 && field.has_char_two() {
        Ok(crate::geom::is_hyperconic(field, &points))
    } else {
        // No MDS code of dimension 3 is longer than q+2; unreachable after
        // the MDS check.
        Ok(false)
    }
}

/// The unique conic through the points when one exists: fitted through
/// the lexicographically first five-point subset in general position and
/// verified against the remaining points.
pub fn arc_on_common_conic(field: &Field, points: &[ProjPoint]) -> Option<Conic> {
    let n = points.len();
    for subset in (0..n).combinations(5) {
        let five: Vec<ProjPoint> = subset.iter().map(|&i| points[i].clone()).collect();
        let Ok(conic) = conic_through_five(field, &five) else {
            continue;
        };
        let rest_on = (0..n)
            .filter(|i| !subset.contains(i))
            .all(|i| conic.evaluate(field, &points[i]).is_zero());
        return rest_on.then_some(conic);
    }
    None
}

/// GRS recognition for dimension k >= 3 and length n <= q+1: fit the
/// unique normal rational curve through k+2 columns in general position
/// and test membership of the rest. Dimension 2 MDS codes are always GRS.
///
/// Lengths n <= k+2 are vacuously GRS; length q+2 is only defined for
/// dimension 3 (or its dual), and other dimensions are rejected.
pub fn is_grs(field: &Field, key: &CodeKey) -> Result<bool> {
    let k = key.k();
    let n = key.n();
    if k == 3 {
        return is_grs_dim3(field, key);
    }
    if n as u64 > field.q() + 1 {
        return Err(Error::Unsupported(format!(
            "length {n} > q+1 recognition is only defined for dimension 3"
        )));
    }
    let m = key.matrix(field)?;
    if !m.is_mds().map_err(|_| Error::NotMds)? {
        return Err(Error::NotMds);
    }
    if k == 2 || n <= k + 2 {
        return Ok(true);
    }
    let points = key_column_points(field, key)?;
    for subset in (0..n).combinations(k + 2) {
        let chosen: Vec<ProjPoint> = subset.iter().map(|&i| points[i].clone()).collect();
        let Ok((r, params)) = fit_nrc(field, &chosen) else {
            continue;
        };
        let curve: std::collections::HashSet<Vec<u8>> = crate::geom::p1_points(field)
            .into_iter()
            .map(|t| {
                let [x, y] = t.homogeneous();
                let p = nrc_point_homogeneous(field, k, x, y);
                ProjPoint::new(field, r.mul_vec(p.coords())).bytes()
            })
            .collect();
        let all_on = points.iter().all(|p| curve.contains(&p.bytes()));
        let _ = params;
        return Ok(all_on);
    }
    Err(Error::NotGeneralPosition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{nrc_point, p1_points};
    use crate::gf::FieldSpec;
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn f(i: u64) -> FieldElement {
        FieldElement(i as u8)
    }

    fn fin(i: u64) -> EvalPoint {
        EvalPoint::Finite(f(i))
    }

    fn ones(n: usize) -> Vec<FieldElement> {
        vec![FieldElement(1); n]
    }

    fn random_params(field: &Field, k: usize, n: usize, rng: &mut StdRng) -> GrsParams {
        let mut pts = p1_points(field);
        pts.shuffle(rng);
        pts.truncate(n);
        let d: Vec<FieldElement> = (0..n)
            .map(|_| field.element(rng.gen_range(1..field.q())))
            .collect();
        GrsParams::new(field, k, pts, d).unwrap()
    }

    #[test]
    fn generator_small_example() {
        let k5 = FieldSpec::new(5, 1).unwrap();
        let p = GrsParams::new(&k5, 2, vec![fin(0), fin(1), EvalPoint::Infinity], ones(3)).unwrap();
        let g = grs_generator(&k5, &p);
        assert_eq!(g.bytes(), [1, 1, 0, 0, 1, 1]);
    }

    #[test]
    fn generator_is_mds_and_systematic() {
        let k5 = FieldSpec::new(5, 1).unwrap();
        let p = GrsParams::new(
            &k5,
            3,
            vec![fin(0), fin(1), fin(2), fin(3), fin(4), EvalPoint::Infinity],
            ones(6),
        )
        .unwrap();
        let g = grs_generator(&k5, &p);
        assert!(g.is_mds().unwrap());
        let key = g.code_key().unwrap();
        // Systematic form: [I_3 | A].
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(key.canonical_bytes()[r * 6 + c], u8::from(r == c));
            }
        }
    }

    #[test]
    fn params_validation() {
        let k5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(
            GrsParams::new(&k5, 2, vec![fin(0), fin(0), fin(1)], ones(3)).unwrap_err(),
            Error::DuplicateEvalPoint
        );
        assert_eq!(
            GrsParams::new(&k5, 2, vec![fin(0), fin(1), fin(2)], vec![f(1), f(0), f(1)])
                .unwrap_err(),
            Error::ZeroMultiplier
        );
        assert!(GrsParams::new(
            &k5,
            2,
            (0..5).map(fin).chain([EvalPoint::Infinity, fin(9)]).collect(),
            ones(7)
        )
        .is_err());
    }

    #[test]
    fn dual_multiplier_values() {
        let k5 = FieldSpec::new(5, 1).unwrap();
        let p = GrsParams::new(
            &k5,
            2,
            vec![fin(0), fin(1), fin(2), EvalPoint::Infinity],
            ones(4),
        )
        .unwrap();
        let delta = dual_multipliers(&k5, &p).unwrap();
        // (0-1)^{-1} (0-2)^{-1} = inverse of 2 = 3.
        assert_eq!(delta[0], f(3));
        let dual = GrsParams::new(&k5, 2, p.eval_points().to_vec(), delta).unwrap();
        let prod = grs_generator(&k5, &p).mul(&grs_generator(&k5, &dual).transpose());
        assert!(prod.bytes().iter().all(|&b| b == 0));
    }

    #[test]
    fn dual_generator_spans_null_space_exhaustively() {
        // Every (t, d) choice over GF(5) for n = 4, 5 and k = 2.
        let k5 = FieldSpec::new(5, 1).unwrap();
        let pts = p1_points(&k5);
        for n in [4usize, 5] {
            let mut tuples = 0u64;
            for t in pts.iter().copied().permutations(n) {
                for d_idx in 0..(4u64.pow(n as u32)) {
                    let mut idx = d_idx;
                    let d: Vec<FieldElement> = (0..n)
                        .map(|_| {
                            let e = f(1 + idx % 4);
                            idx /= 4;
                            e
                        })
                        .collect();
                    let p = GrsParams::new(&k5, 2, t.clone(), d).unwrap();
                    let delta = dual_multipliers(&k5, &p).unwrap();
                    let dual = GrsParams::new(&k5, n - 2, t.clone(), delta).unwrap();
                    let g = grs_generator(&k5, &p);
                    let gd = grs_generator(&k5, &dual);
                    assert_eq!(
                        g.null_space_basis().unwrap().code_key().unwrap(),
                        gd.code_key().unwrap()
                    );
                    tuples += 1;
                }
            }
            assert_eq!(tuples as u128, {
                let perms: u128 = (0..n as u128).map(|i| 6 - i).product();
                perms * 4u128.pow(n as u32)
            });
        }
    }

    use itertools::Itertools;

    #[test]
    fn dual_of_frame_extension_has_closed_form() {
        // G = [I_k | v w]; the dual parameterization t_i = w_i/v_i,
        // d = (-v, 1, 1) reproduces [-v^T 1 0; -w^T 0 1] exactly.
        let k7 = FieldSpec::new(7, 1).unwrap();
        let k = 3;
        let v = [f(1), f(2), f(3)];
        let w = [f(1), f(4), f(2)];
        let mut t: Vec<EvalPoint> = (0..k).map(|i| fin((k7.div(w[i], v[i])).0 as u64)).collect();
        t.push(fin(0));
        t.push(EvalPoint::Infinity);
        let mut d: Vec<FieldElement> = v.iter().map(|&vi| k7.neg(vi)).collect();
        d.extend([f(1), f(1)]);
        let params = GrsParams::new(&k7, 2, t, d).unwrap();
        let g2 = grs_generator(&k7, &params);
        let expected = MatrixGF::from_rows(
            &k7,
            &[
                vec![k7.neg(v[0]), k7.neg(v[1]), k7.neg(v[2]), f(1), f(0)],
                vec![k7.neg(w[0]), k7.neg(w[1]), k7.neg(w[2]), f(0), f(1)],
            ],
        );
        assert_eq!(g2, expected);
        // And it is orthogonal to [I_k | v w].
        let g = MatrixGF::from_fn(&k7, 3, 5, |r, c| match c {
            0..=2 => f(u64::from(r == c)),
            3 => v[r],
            _ => w[r],
        });
        assert!(g.mul(&g2.transpose()).bytes().iter().all(|&b| b == 0));
    }

    #[test]
    fn mds_duality_on_random_grs_matrices() {
        let mut rng = StdRng::seed_from_u64(11);
        for q in [5u64, 7, 8, 9] {
            let field = FieldSpec::for_order(q).unwrap();
            for _ in 0..20 {
                let p = random_params(&field, 3, 6, &mut rng);
                let g = grs_generator(&field, &p);
                let dual = g.null_space_basis().unwrap();
                assert_eq!(g.is_mds().unwrap(), dual.is_mds().unwrap());
                assert!(g.is_mds().unwrap());
            }
        }
    }

    #[test]
    fn fit_nrc_recovers_conic() {
        let k5 = FieldSpec::new(5, 1).unwrap();
        let pts: Vec<ProjPoint> = [0u64, 1, 2, 3]
            .iter()
            .map(|&t| nrc_point(&k5, 3, fin(t)).unwrap())
            .chain([nrc_point(&k5, 3, EvalPoint::Infinity).unwrap()])
            .collect();
        let (r, params) = fit_nrc(&k5, &pts).unwrap();
        let g = r.mul(&grs_generator(&k5, &params));
        for (c, p) in pts.iter().enumerate() {
            assert_eq!(&ProjPoint::new(&k5, g.column(c)), p);
        }
        // The fitted curve's point set is the standard conic.
        let fitted: std::collections::HashSet<Vec<u8>> = p1_points(&k5)
            .into_iter()
            .map(|t| {
                let p = nrc_point(&k5, 3, t).unwrap();
                ProjPoint::new(&k5, r.mul_vec(p.coords())).bytes()
            })
            .collect();
        let standard: std::collections::HashSet<Vec<u8>> = p1_points(&k5)
            .into_iter()
            .map(|t| nrc_point(&k5, 3, t).unwrap().bytes())
            .collect();
        assert_eq!(fitted, standard);
    }

    #[test]
    fn fit_nrc_agrees_with_conic_fitter() {
        let k7 = FieldSpec::new(7, 1).unwrap();
        let pts = vec![
            ProjPoint::from_indices(&k7, &[1, 0, 0]),
            ProjPoint::from_indices(&k7, &[0, 1, 0]),
            ProjPoint::from_indices(&k7, &[0, 0, 1]),
            ProjPoint::from_indices(&k7, &[1, 1, 1]),
            ProjPoint::from_indices(&k7, &[1, 2, 4]),
        ];
        let (r, params) = fit_nrc(&k7, &pts).unwrap();
        let conic = conic_through_five(&k7, &pts).unwrap();
        for t in p1_points(&k7) {
            let p = nrc_point(&k7, 3, t).unwrap();
            let on_curve = ProjPoint::new(&k7, r.mul_vec(p.coords()));
            assert!(conic.evaluate(&k7, &on_curve).is_zero());
        }
        assert_eq!(params.n(), 5);
    }

    #[test]
    fn fit_nrc_on_standard_curve_points() {
        let k7 = FieldSpec::new(7, 1).unwrap();
        let pts: Vec<ProjPoint> = [0u64, 1, 2, 3, 4]
            .iter()
            .map(|&t| nrc_point(&k7, 4, fin(t)).unwrap())
            .chain([nrc_point(&k7, 4, EvalPoint::Infinity).unwrap()])
            .collect();
        let (r, params) = fit_nrc(&k7, &pts).unwrap();
        let fitted: std::collections::HashSet<Vec<u8>> = p1_points(&k7)
            .into_iter()
            .map(|t| {
                let p = nrc_point(&k7, 4, t).unwrap();
                ProjPoint::new(&k7, r.mul_vec(p.coords())).bytes()
            })
            .collect();
        let standard: std::collections::HashSet<Vec<u8>> = p1_points(&k7)
            .into_iter()
            .map(|t| nrc_point(&k7, 4, t).unwrap().bytes())
            .collect();
        assert_eq!(fitted, standard);
        assert_eq!(params.k(), 4);
    }

    #[test]
    fn fit_nrc_point_set_is_order_invariant() {
        let k7 = FieldSpec::new(7, 1).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        let pts: Vec<ProjPoint> = [0u64, 2, 3, 5, 6]
            .iter()
            .map(|&t| nrc_point(&k7, 3, fin(t)).unwrap())
            .collect();
        let curve_set = |points: &[ProjPoint]| {
            let (r, _) = fit_nrc(&k7, points).unwrap();
            let mut set: Vec<Vec<u8>> = p1_points(&k7)
                .into_iter()
                .map(|t| {
                    let p = nrc_point(&k7, 3, t).unwrap();
                    ProjPoint::new(&k7, r.mul_vec(p.coords())).bytes()
                })
                .collect();
            set.sort();
            set
        };
        let reference = curve_set(&pts);
        for _ in 0..10 {
            let mut shuffled = pts.clone();
            shuffled.shuffle(&mut rng);
            assert_eq!(curve_set(&shuffled), reference);
        }
    }

    #[test]
    fn fit_nrc_rejects_degenerate_input() {
        let k7 = FieldSpec::new(7, 1).unwrap();
        let pts = vec![
            ProjPoint::from_indices(&k7, &[1, 0, 0]),
            ProjPoint::from_indices(&k7, &[0, 1, 0]),
            ProjPoint::from_indices(&k7, &[1, 1, 0]),
            ProjPoint::from_indices(&k7, &[0, 0, 1]),
            ProjPoint::from_indices(&k7, &[1, 1, 1]),
        ];
        assert_eq!(fit_nrc(&k7, &pts).unwrap_err(), Error::NotGeneralPosition);
    }

    fn full_conic_base(field: &Field) -> GrsParams {
        GrsParams::new(field, 3, p1_points(field), ones(field.q() as usize + 1)).unwrap()
    }

    #[test]
    fn hyperconic_generators_are_mds() {
        let k4 = FieldSpec::new(2, 2).unwrap();
        let h = HyperconicParams::new(&k4, full_conic_base(&k4), 5, f(1)).unwrap();
        let g = hyperconic_generator(&k4, &h).unwrap();
        assert_eq!((g.rows(), g.cols()), (3, 6));
        assert!(g.is_mds().unwrap());

        let k8 = FieldSpec::new(2, 3).unwrap();
        let h = HyperconicParams::new(&k8, full_conic_base(&k8), 0, f(3)).unwrap();
        let g = hyperconic_generator(&k8, &h).unwrap();
        assert_eq!(g.column(0), vec![f(0), f(3), f(0)]);
        assert!(g.is_mds().unwrap());

        let k5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(
            HyperconicParams::new(&k5, full_conic_base(&k5), 0, f(1)).unwrap_err(),
            Error::OddCharacteristic
        );
    }

    #[test]
    fn puncture_examples() {
        let k8 = FieldSpec::new(2, 3).unwrap();
        let h = HyperconicParams::new(&k8, full_conic_base(&k8), 9, f(1)).unwrap();
        let key = hyperconic_generator(&k8, &h).unwrap().code_key().unwrap();
        let p1 = puncture(&k8, &key, 1).unwrap();
        assert_eq!((p1.k(), p1.n()), (3, 9));
        assert!(p1.matrix(&k8).unwrap().is_mds().unwrap());
        assert_eq!(&puncture(&k8, &key, 0).unwrap(), &key);

        let k7 = FieldSpec::new(7, 1).unwrap();
        let p = GrsParams::new(
            &k7,
            3,
            vec![fin(0), fin(1), fin(2), fin(3), fin(5), EvalPoint::Infinity],
            ones(6),
        )
        .unwrap();
        let key = grs_generator(&k7, &p).code_key().unwrap();
        let shorter = puncture(&k7, &key, 1).unwrap();
        assert_eq!(shorter.n(), 5);
        assert!(is_grs_dim3(&k7, &shorter).unwrap());
    }

    #[test]
    fn recognition_dim3() {
        let k7 = FieldSpec::new(7, 1).unwrap();
        let p = GrsParams::new(
            &k7,
            3,
            vec![fin(0), fin(1), fin(2), fin(3), fin(4), fin(5)],
            ones(6),
        )
        .unwrap();
        let key = grs_generator(&k7, &p).code_key().unwrap();
        assert!(is_grs_dim3(&k7, &key).unwrap());

        // A [6,3] MDS code over GF(7) that is not GRS: extend the frame
        // plus [1,2,4] by the first column that keeps the matrix MDS but
        // leaves the conic through the first five points. Such codes
        // exist (1088640 MDS vs 466560 GRS at this length).
        let mut found = false;
        'outer: for y in 0..7u64 {
            for z in 0..7u64 {
                let pts = [[1u64, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 4], [1, y, z]];
                let m = MatrixGF::from_fn(&k7, 3, 6, |r, c| f(pts[c][r]));
                if m.is_mds().unwrap() && !is_grs_dim3(&k7, &m.code_key().unwrap()).unwrap() {
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found, "a non-GRS [6,3] code over GF(7) must exist");

        let k8 = FieldSpec::new(2, 3).unwrap();
        let h = HyperconicParams::new(&k8, full_conic_base(&k8), 4, f(5)).unwrap();
        let key = hyperconic_generator(&k8, &h).unwrap().code_key().unwrap();
        assert!(is_grs_dim3(&k8, &key).unwrap());

        // Length 4 is refused.
        let p = GrsParams::new(&k7, 3, vec![fin(0), fin(1), fin(2), fin(3)], ones(4)).unwrap();
        let key = grs_generator(&k7, &p).code_key().unwrap();
        assert_eq!(is_grs_dim3(&k7, &key).unwrap_err(), Error::TooShort(4));
    }

    #[test]
    fn recognition_higher_dimension() {
        let mut rng = StdRng::seed_from_u64(17);
        for (q, k) in [(7u64, 4usize), (8, 4), (9, 5)] {
            let field = FieldSpec::for_order(q).unwrap();
            let p = random_params(&field, k, k + 3, &mut rng);
            let key = grs_generator(&field, &p).code_key().unwrap();
            assert!(is_grs(&field, &key).unwrap(), "q={q} k={k}");
        }
        // A non-GRS [7,4] code: the dual of a non-GRS [7,3] code over
        // GF(8). (Over GF(7) no non-GRS [7,4] code exists, since every
        // 7-arc extends to a conic.) Duality preserves the GRS property,
        // so the dual of a non-GRS MDS code is again non-GRS.
        let k8 = FieldSpec::for_order(8).unwrap();
        let non_grs_dual = loop {
            let m = MatrixGF::from_fn(&k8, 3, 7, |r, c| {
                if c < 3 {
                    f(u64::from(r == c))
                } else {
                    FieldElement(rng.gen_range(0..8) as u8)
                }
            });
            if m.rank() == 3
                && m.is_mds().unwrap()
                && !is_grs_dim3(&k8, &m.code_key().unwrap()).unwrap()
            {
                break m.null_space_basis().unwrap().code_key().unwrap();
            }
        };
        assert_eq!((non_grs_dual.k(), non_grs_dual.n()), (4, 7));
        assert!(!is_grs(&k8, &non_grs_dual).unwrap());
    }
}
