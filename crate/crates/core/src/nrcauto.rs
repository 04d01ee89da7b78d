//! The symmetric-power homomorphism from PGL_2 into PGL_k, its
//! equivariance with the Mobius action on the normal rational curve, and
//! stabilizer checks for GRS generator matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{nrc_point_homogeneous, EvalPoint, ProjPoint};
use crate::gf::{Field, FieldElement};
use crate::grscore::{grs_generator, GrsParams};
use crate::linalg::MatrixGF;
use crate::{Error, Result};

/// A Mobius transformation t -> (gamma + delta t) / (alpha + beta t),
/// stored as the invertible matrix (alpha beta; gamma delta) acting on
/// homogeneous coordinates [x, y] with t = y/x.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub gamma: FieldElement,
    pub delta: FieldElement,
}

impl Mobius {
    pub fn new(
        field: &Field,
        alpha: FieldElement,
        beta: FieldElement,
        gamma: FieldElement,
        delta: FieldElement,
    ) -> Result<Mobius> {
        let det = field.sub(field.mul(alpha, delta), field.mul(beta, gamma));
        if det.is_zero() {
            return Err(Error::SingularG);
        }
        Ok(Mobius {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn identity(field: &Field) -> Mobius {
        Mobius {
            alpha: field.one(),
            beta: field.zero(),
            gamma: field.zero(),
            delta: field.one(),
        }
    }

    /// Action on P^1, with the usual conventions at infinity.
    pub fn act(&self, field: &Field, t: EvalPoint) -> EvalPoint {
        let [x, y] = t.homogeneous();
        let xx = field.add(field.mul(self.alpha, x), field.mul(self.beta, y));
        let yy = field.add(field.mul(self.gamma, x), field.mul(self.delta, y));
        if xx.is_zero() {
            EvalPoint::Infinity
        } else {
            EvalPoint::Finite(field.div(yy, xx))
        }
    }

    /// Matrix product; (g.compose(h)).act = g.act after h.act.
    pub fn compose(&self, field: &Field, other: &Mobius) -> Mobius {
        Mobius {
            alpha: field.add(
                field.mul(self.alpha, other.alpha),
                field.mul(self.beta, other.gamma),
            ),
            beta: field.add(
                field.mul(self.alpha, other.beta),
                field.mul(self.beta, other.delta),
            ),
            gamma: field.add(
                field.mul(self.gamma, other.alpha),
                field.mul(self.delta, other.gamma),
            ),
            delta: field.add(
                field.mul(self.gamma, other.beta),
                field.mul(self.delta, other.delta),
            ),
        }
    }
}

/// Image of a Mobius transformation in PGL_k, stored scalar-normalized so
/// that the first nonzero entry (row major) is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoImage {
    k: usize,
    m: MatrixGF,
}

impl RhoImage {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &MatrixGF {
        &self.m
    }
}

/// The (k-1)-th symmetric power representation of a 2x2 matrix
/// (a b; c d): entry (i, j) is the coefficient of the i-th monomial in
/// (a e + c f)^{k-1-j} (b e + d f)^{j}, with binomial coefficients reduced
/// in the field characteristic.
fn rho_matrix(field: &Field, k: usize, h: &Mobius) -> MatrixGF {
    let (a, b, c, d) = (h.alpha, h.beta, h.gamma, h.delta);
    MatrixGF::from_fn(&field, k, k, |i, j| {
        let mut acc = FieldElement(0);
        // s powers of c from the first factor, r = i - s of d from the second.
        for s in 0..=i.min(k - 1 - j) {
            let r = i - s;
            if r > j {
                continue;
            }
            let coeff = field.mul(
                field.from_int(binomial(k - 1 - j, s)),
                field.from_int(binomial(j, r)),
            );
            let term = field.mul(
                field.mul(
                    field.pow(a, (k - 1 - j - s) as u64),
                    field.pow(c, s as u64),
                ),
                field.mul(field.pow(b, (j - r) as u64), field.pow(d, r as u64)),
            );
            acc = field.add(acc, field.mul(coeff, term));
        }
        acc
    })
}

/// The induced map PGL_2 -> PGL_k: the transpose of the symmetric power
/// of the transpose, scalar-normalized. Satisfies
/// `rho_prime(g) . [1, t, ..., t^{k-1}] = [1, tau, ..., tau^{k-1}]` for
/// tau = (gamma + delta t) / (alpha + beta t).
pub fn rho_prime(field: &Field, g: &Mobius, k: usize) -> Result<RhoImage> {
    if k < 2 || k as u64 > field.q() {
        return Err(Error::BadDimension(format!(
            "symmetric power needs 2 <= k <= q, got k={k}"
        )));
    }
    let det = field.sub(field.mul(g.alpha, g.delta), field.mul(g.beta, g.gamma));
    if det.is_zero() {
        return Err(Error::SingularG);
    }
    let transposed = Mobius {
        alpha: g.alpha,
        beta: g.gamma,
        gamma: g.beta,
        delta: g.delta,
    };
    let m = rho_matrix(field, k, &transposed).transpose();
    Ok(RhoImage {
        k,
        m: normalize_matrix(field, m),
    })
}

fn normalize_matrix(field: &Field, m: MatrixGF) -> MatrixGF {
    let lead = m
        .bytes()
        .into_iter()
        .find(|&b| b != 0)
        .expect("image of an invertible matrix is nonzero");
    if lead == 1 {
        return m;
    }
    m.scale(field.inv(FieldElement(lead)))
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// True when `rho_prime(g, k)` maps the curve point at t to the curve
/// point at g(t), projectively, including the cases at infinity.
pub fn check_equivariance(field: &Field, g: &Mobius, k: usize, t: EvalPoint) -> Result<bool> {
    let rho = rho_prime(field, g, k)?;
    let [x, y] = t.homogeneous();
    let source = nrc_point_homogeneous(field, k, x, y);
    let lhs = ProjPoint::new(field, rho.matrix().mul_vec(source.coords()));
    let tau = g.act(field, t);
    let [tx, ty] = tau.homogeneous();
    let rhs = nrc_point_homogeneous(field, k, tx, ty);
    Ok(lhs == rhs)
}

/// Order of the group acting freely on GRS generator matrices: the
/// central extension of PGL_2(q) by the nonzero scalars, of cardinality
/// (q+1) q (q-1)^2.
pub fn group_order(q: u64) -> u64 {
    (q + 1) * q * (q - 1) * (q - 1)
}

/// Normalized representatives of PGL_2(q), in a fixed deterministic order.
pub fn pgl2_elements(field: &Field) -> Vec<Mobius> {
    let q = field.q();
    let mut out = Vec::with_capacity(((q + 1) * q * (q - 1)) as usize);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let entries = [a, b, c, d];
                    let first = entries.iter().position(|&e| e != 0);
                    if first.map_or(true, |i| entries[i] != 1) {
                        continue;
                    }
                    let m = Mobius {
                        alpha: field.element(a),
                        beta: field.element(b),
                        gamma: field.element(c),
                        delta: field.element(d),
                    };
                    let det = field.sub(
                        field.mul(m.alpha, m.delta),
                        field.mul(m.beta, m.gamma),
                    );
                    if !det.is_zero() {
                        out.push(m);
                    }
                }
            }
        }
    }
    debug_assert_eq!(out.len() as u64, (q + 1) * q * (q - 1));
    out
}

/// All matrices of the group acting on k x n GRS generator matrices: the
/// scalar lifts of the symmetric-power images of PGL_2(q). Materialized
/// only for q <= 9.
pub fn group_elements(field: &Field, k: usize) -> Result<Vec<MatrixGF>> {
    let q = field.q();
    if q > 9 {
        return Err(Error::TooLarge(format!(
            "materializing the group of order {} is restricted to q <= 9",
            group_order(q)
        )));
    }
    let mut out = Vec::with_capacity(group_order(q) as usize);
    for g in pgl2_elements(field) {
        let image = rho_prime(field, &g, k)?;
        for lambda in field.nonzero_elements() {
            out.push(image.matrix().scale(lambda));
        }
    }
    Ok(out)
}

/// True when no non-identity element of the group fixes the generator
/// matrix of `params` exactly. Exhaustive over all scalar lifts for
/// q <= 9; sampled (deterministically) for larger fields.
pub fn stabilizer_is_trivial(field: &Field, params: &GrsParams) -> Result<bool> {
    if params.n() < 3 {
        return Err(Error::OutOfRange(
            "stabilizer check needs n >= 3 (a Mobius map can fix two points)".into(),
        ));
    }
    let g = grs_generator(field, params);
    let q = field.q();
    if q <= 9 {
        let mut fixers = 0u64;
        for m in group_elements(field, params.k())? {
            if m.mul(&g) == g {
                fixers += 1;
            }
        }
        return Ok(fixers == 1);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x47525321);
    for _ in 0..2000 {
        let m = loop {
            let cand = Mobius {
                alpha: field.element(rng.gen_range(0..q)),
                beta: field.element(rng.gen_range(0..q)),
                gamma: field.element(rng.gen_range(0..q)),
                delta: field.element(rng.gen_range(0..q)),
            };
            if Mobius::new(field, cand.alpha, cand.beta, cand.gamma, cand.delta).is_ok() {
                break cand;
            }
        };
        let image = rho_prime(field, &m, params.k())?;
        let lambda = field.element(rng.gen_range(1..q));
        let lifted = image.matrix().scale(lambda);
        if lifted.mul(&g) == g && lifted != MatrixGF::identity(&field, params.k()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::p1_points;
    use crate::gf::FieldSpec;
    use rand::rngs::StdRng;
    use rand::Rng;

    fn f(i: u64) -> FieldElement {
        FieldElement(i as u8)
    }

    fn random_mobius(field: &Field, rng: &mut StdRng) -> Mobius {
        loop {
            let m = Mobius {
                alpha: field.element(rng.gen_range(0..field.q())),
                beta: field.element(rng.gen_range(0..field.q())),
                gamma: field.element(rng.gen_range(0..field.q())),
                delta: field.element(rng.gen_range(0..field.q())),
            };
            if Mobius::new(field, m.alpha, m.beta, m.gamma, m.delta).is_ok() {
                break m;
            }
        }
    }

    #[test]
    fn rho_prime_dimension_three_closed_form() {
        // [[a^2, 2ab, b^2], [ac, ad+cb, bd], [c^2, 2cd, d^2]] up to scalar.
        let mut rng = StdRng::seed_from_u64(3);
        for q in [5u64, 7, 8, 9] {
            let field = FieldSpec::for_order(q).unwrap();
            for _ in 0..40 {
                let g = random_mobius(&field, &mut rng);
                let (a, b, c, d) = (g.alpha, g.beta, g.gamma, g.delta);
                let two = field.from_int(2);
                let expected = MatrixGF::from_rows(
                    &field,
                    &[
                        vec![
                            field.mul(a, a),
                            field.mul(two, field.mul(a, b)),
                            field.mul(b, b),
                        ],
                        vec![
                            field.mul(a, c),
                            field.add(field.mul(a, d), field.mul(c, b)),
                            field.mul(b, d),
                        ],
                        vec![
                            field.mul(c, c),
                            field.mul(two, field.mul(c, d)),
                            field.mul(d, d),
                        ],
                    ],
                );
                let image = rho_prime(&field, &g, 3).unwrap();
                assert_eq!(image.matrix(), &normalize_matrix(&field, expected));
            }
        }
    }

    #[test]
    fn rho_prime_identity_and_char_two_collapse() {
        let k8 = FieldSpec::new(2, 3).unwrap();
        let id = Mobius::identity(&k8);
        for k in 2..=5 {
            assert_eq!(
                rho_prime(&k8, &id, k).unwrap().matrix(),
                &MatrixGF::identity(&k8, k)
            );
        }
        // The 2ab and 2cd entries vanish in characteristic two.
        let g = Mobius::new(&k8, f(3), f(5), f(2), f(7)).unwrap();
        let image = rho_prime(&k8, &g, 3).unwrap();
        assert!(image.matrix().get(0, 1).is_zero());
        assert!(image.matrix().get(2, 1).is_zero());
    }

    #[test]
    fn equivariance_exhaustive_gf5_dimension_three() {
        let k5 = FieldSpec::new(5, 1).unwrap();
        let pts = p1_points(&k5);
        let mut checked = 0u64;
        for a in 0..5u64 {
            for b in 0..5u64 {
                for c in 0..5u64 {
                    for d in 0..5u64 {
                        let Ok(g) = Mobius::new(&k5, f(a), f(b), f(c), f(d)) else {
                            continue;
                        };
                        for &t in &pts {
                            assert!(check_equivariance(&k5, &g, 3, t).unwrap());
                            checked += 1;
                        }
                    }
                }
            }
        }
        // |GL_2(F_5)| * |P^1| = 480 * 6.
        assert_eq!(checked, 2880);
    }

    #[test]
    fn equivariance_special_points() {
        let k5 = FieldSpec::new(5, 1).unwrap();
        // The swap map sends 0 to infinity.
        let swap = Mobius::new(&k5, f(0), f(1), f(1), f(0)).unwrap();
        assert_eq!(swap.act(&k5, EvalPoint::Finite(f(0))), EvalPoint::Infinity);
        let image = rho_prime(&k5, &swap, 4)
            .unwrap()
            .matrix()
            .mul_vec(nrc_point_homogeneous(&k5, 4, f(1), f(0)).coords());
        assert_eq!(ProjPoint::new(&k5, image).bytes(), [0, 0, 0, 1]);
        // Translations fix infinity.
        for c in 0..5u64 {
            let tr = Mobius::new(&k5, f(1), f(0), f(c), f(1)).unwrap();
            assert_eq!(tr.act(&k5, EvalPoint::Infinity), EvalPoint::Infinity);
        }
    }

    #[test]
    fn homomorphism_up_to_scalar_sampled() {
        let mut rng = StdRng::seed_from_u64(29);
        for q in [5u64, 8, 9] {
            let field = FieldSpec::for_order(q).unwrap();
            for k in 3..=5usize {
                for _ in 0..1000 {
                    let g = random_mobius(&field, &mut rng);
                    let h = random_mobius(&field, &mut rng);
                    let gh = g.compose(&field, &h);
                    let lhs = rho_prime(&field, &gh, k).unwrap();
                    let rhs = normalize_matrix(
                        &field,
                        rho_prime(&field, &g, k)
                            .unwrap()
                            .matrix()
                            .mul(rho_prime(&field, &h, k).unwrap().matrix()),
                    );
                    assert_eq!(lhs.matrix(), &rhs, "q={q} k={k}");
                }
            }
        }
    }

    #[test]
    fn injectivity_exhaustive_small_fields() {
        // k = 3 needs q >= 3 for the curve assumption k <= q.
        for q in [3u64, 4, 5, 7] {
            let field = FieldSpec::for_order(q).unwrap();
            let identity = MatrixGF::identity(&field, 3);
            let trivial = pgl2_elements(&field)
                .iter()
                .filter(|g| rho_prime(&field, g, 3).unwrap().matrix() == &identity)
                .count();
            assert_eq!(trivial, 1, "kernel must be trivial for q={q}");
        }
    }

    #[test]
    fn image_permutes_curve_points() {
        let mut rng = StdRng::seed_from_u64(31);
        for q in [5u64, 7, 8, 9] {
            let field = FieldSpec::for_order(q).unwrap();
            for k in [3usize, 4] {
                let curve: std::collections::HashSet<Vec<u8>> = p1_points(&field)
                    .into_iter()
                    .map(|t| {
                        let [x, y] = t.homogeneous();
                        nrc_point_homogeneous(&field, k, x, y).bytes()
                    })
                    .collect();
                for _ in 0..25 {
                    let g = random_mobius(&field, &mut rng);
                    let m = rho_prime(&field, &g, k).unwrap();
                    let image: std::collections::HashSet<Vec<u8>> = p1_points(&field)
                        .into_iter()
                        .map(|t| {
                            let [x, y] = t.homogeneous();
                            let p = nrc_point_homogeneous(&field, k, x, y);
                            ProjPoint::new(&field, m.matrix().mul_vec(p.coords())).bytes()
                        })
                        .collect();
                    assert_eq!(image, curve);
                }
            }
        }
    }

    #[test]
    fn group_order_values() {
        assert_eq!(group_order(5), 480);
        assert_eq!(group_order(2), 6);
        assert_eq!(group_order(8), 3528);
    }

    #[test]
    fn group_materialization_sizes() {
        for q in [2u64, 4, 5] {
            let field = FieldSpec::for_order(q).unwrap();
            let elements = group_elements(&field, 3.min(q as usize)).unwrap();
            assert_eq!(elements.len() as u64, group_order(q));
            let distinct: std::collections::HashSet<Vec<u8>> =
                elements.iter().map(|m| m.bytes()).collect();
            assert_eq!(distinct.len() as u64, group_order(q));
        }
    }

    #[test]
    fn stabilizers_are_trivial() {
        let k5 = FieldSpec::new(5, 1).unwrap();
        let p = GrsParams::new(
            &k5,
            2,
            vec![
                EvalPoint::Finite(f(0)),
                EvalPoint::Finite(f(1)),
                EvalPoint::Finite(f(2)),
                EvalPoint::Infinity,
            ],
            vec![f(1); 4],
        )
        .unwrap();
        assert!(stabilizer_is_trivial(&k5, &p).unwrap());

        let p = GrsParams::new(
            &k5,
            3,
            vec![
                EvalPoint::Finite(f(0)),
                EvalPoint::Finite(f(1)),
                EvalPoint::Finite(f(2)),
                EvalPoint::Finite(f(3)),
                EvalPoint::Finite(f(4)),
            ],
            vec![f(1); 5],
        )
        .unwrap();
        assert!(stabilizer_is_trivial(&k5, &p).unwrap());

        let p = GrsParams::new(
            &k5,
            1,
            vec![EvalPoint::Finite(f(0)), EvalPoint::Finite(f(1))],
            vec![f(1); 2],
        )
        .unwrap();
        assert!(matches!(
            stabilizer_is_trivial(&k5, &p),
            Err(Error::OutOfRange(_))
        ));
    }
}
