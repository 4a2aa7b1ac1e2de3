//! 2×2 matrices over F_q(t) and over F_q.

use crate::algebra::{FieldSpec, Fq, Poly, RatFunc};
use crate::error::Error;

/// A 2×2 matrix with rational-function entries. Most call sites require a
/// nonzero determinant; `det` is exact so the check is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: RatFunc,
    pub b: RatFunc,
    pub c: RatFunc,
    pub d: RatFunc,
}

impl Mat2 {
    pub fn new(a: RatFunc, b: RatFunc, c: RatFunc, d: RatFunc) -> Mat2 {
        Mat2 { a, b, c, d }
    }
    pub fn identity() -> Mat2 {
        Mat2::new(RatFunc::one(), RatFunc::zero(), RatFunc::zero(), RatFunc::one())
    }
    /// [[0,1],[1,0]].
    pub fn swap() -> Mat2 {
        Mat2::new(RatFunc::zero(), RatFunc::one(), RatFunc::one(), RatFunc::zero())
    }
    pub fn diag(a: RatFunc, d: RatFunc) -> Mat2 {
        Mat2::new(a, RatFunc::zero(), RatFunc::zero(), d)
    }
    /// p_n = [[t^{-n}, 0], [0, 1]].
    pub fn p_n(n: i64) -> Mat2 {
        Mat2::diag(RatFunc::t_pow(-n), RatFunc::one())
    }
    /// Upper unipotent [[1, u], [0, 1]].
    pub fn upper(u: RatFunc) -> Mat2 {
        Mat2::new(RatFunc::one(), u, RatFunc::zero(), RatFunc::one())
    }
    /// Lower unipotent [[1, 0], [u, 1]].
    pub fn lower(u: RatFunc) -> Mat2 {
        Mat2::new(RatFunc::one(), RatFunc::zero(), u, RatFunc::one())
    }
    /// ϑ_w: [[1,0],[a,1]] for w = [1:a] and the swap for w = [0:1].
    pub fn theta(w: crate::algebra::ProjPoint) -> Mat2 {
        match w {
            crate::algebra::ProjPoint::Finite(a) => Mat2::lower(RatFunc::constant(a)),
            crate::algebra::ProjPoint::Infinity => Mat2::swap(),
        }
    }
    pub fn from_fq(m: &FqMat2) -> Mat2 {
        Mat2::new(
            RatFunc::constant(m.0[0][0]),
            RatFunc::constant(m.0[0][1]),
            RatFunc::constant(m.0[1][0]),
            RatFunc::constant(m.0[1][1]),
        )
    }
    /// g_0 + g_1 t + ... + g_{r-1} t^{r-1} from constant matrices.
    pub fn from_fq_poly(coeffs: &[FqMat2], f: &FieldSpec) -> Mat2 {
        let entry = |i: usize, j: usize| {
            let c: Vec<Fq> = coeffs.iter().map(|g| g.0[i][j]).collect();
            RatFunc::from_poly(Poly::from_coeffs(c))
        };
        let _ = f;
        Mat2::new(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1))
    }

    pub fn det(&self, f: &FieldSpec) -> RatFunc {
        self.a.mul(&self.d, f).sub(&self.b.mul(&self.c, f), f)
    }

    pub fn mul(&self, o: &Mat2, f: &FieldSpec) -> Mat2 {
        Mat2::new(
            self.a.mul(&o.a, f).add(&self.b.mul(&o.c, f), f),
            self.a.mul(&o.b, f).add(&self.b.mul(&o.d, f), f),
            self.c.mul(&o.a, f).add(&self.d.mul(&o.c, f), f),
            self.c.mul(&o.b, f).add(&self.d.mul(&o.d, f), f),
        )
    }

    pub fn scale(&self, z: &RatFunc, f: &FieldSpec) -> Mat2 {
        Mat2::new(self.a.mul(z, f), self.b.mul(z, f), self.c.mul(z, f), self.d.mul(z, f))
    }

    pub fn inverse(&self, f: &FieldSpec) -> Result<Mat2, Error> {
        let det = self.det(f);
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let inv = det.inv(f);
        Ok(Mat2::new(
            self.d.mul(&inv, f),
            self.b.neg(f).mul(&inv, f),
            self.c.neg(f).mul(&inv, f),
            self.a.mul(&inv, f),
        ))
    }

    /// True iff every entry lies in the local ring at t (no pole at 0).
    pub fn is_integral_at_t(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|e| e.is_integral_at_t())
    }

    /// True iff the matrix lies in K_x = GL_2(O_x): integral entries and
    /// unit determinant.
    pub fn is_in_kx(&self, f: &FieldSpec) -> bool {
        self.is_integral_at_t() && {
            let det = self.det(f);
            !det.is_zero() && det.valuation_at_t().unwrap() == 0
        }
    }

    /// True iff the matrix lies in Γ_x = GL_2(F_q[t⁻¹]): entries polynomial
    /// in t⁻¹ and determinant a nonzero constant.
    pub fn is_in_gamma(&self, f: &FieldSpec) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|e| e.is_poly_in_t_inv()) && {
            let det = self.det(f);
            !det.is_zero() && det.num().deg() == Some(0) && det.den().deg() == Some(0)
        }
    }

    /// Reduction mod t; requires integral entries.
    pub fn mod_t(&self, f: &FieldSpec) -> FqMat2 {
        FqMat2([
            [self.a.eval_at_zero(f), self.b.eval_at_zero(f)],
            [self.c.eval_at_zero(f), self.d.eval_at_zero(f)],
        ])
    }

    /// Entry-wise truncation of the t-adic expansion mod t^r, as constant
    /// coefficient matrices g_0, ..., g_{r-1}. Requires integral entries.
    pub fn series_coeffs(&self, r: usize, f: &FieldSpec) -> Vec<FqMat2> {
        let coeff = |e: &RatFunc, i: i64| e.series_coeff(i, f);
        (0..r as i64)
            .map(|i| {
                FqMat2([
                    [coeff(&self.a, i), coeff(&self.b, i)],
                    [coeff(&self.c, i), coeff(&self.d, i)],
                ])
            })
            .collect()
    }

    pub fn format(&self, f: &FieldSpec) -> String {
        format!(
            "{}, {} ; {}, {}",
            self.a.format(f),
            self.b.format(f),
            self.c.format(f),
            self.d.format(f)
        )
    }
}

/// A 2×2 matrix over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqMat2(pub [[Fq; 2]; 2]);

impl FqMat2 {
    pub fn identity() -> FqMat2 {
        FqMat2([[Fq::ONE, Fq::ZERO], [Fq::ZERO, Fq::ONE]])
    }
    pub fn det(&self, f: &FieldSpec) -> Fq {
        f.sub(f.mul(self.0[0][0], self.0[1][1]), f.mul(self.0[0][1], self.0[1][0]))
    }
    pub fn mul(&self, o: &FqMat2, f: &FieldSpec) -> FqMat2 {
        let mut out = [[Fq::ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = f.add(
                    f.mul(self.0[i][0], o.0[0][j]),
                    f.mul(self.0[i][1], o.0[1][j]),
                );
            }
        }
        FqMat2(out)
    }
    pub fn bottom_row(&self) -> (Fq, Fq) {
        (self.0[1][0], self.0[1][1])
    }

    /// All of GL_2(F_q) in deterministic (entry-code) order.
    pub fn gl2(f: &FieldSpec) -> Vec<FqMat2> {
        let q = f.q();
        let mut out = Vec::new();
        for code in 0..q.pow(4) {
            let mut c = code;
            let mut e = [Fq::ZERO; 4];
            for slot in e.iter_mut() {
                *slot = f.elem(c % q);
                c /= q;
            }
            let m = FqMat2([[e[0], e[1]], [e[2], e[3]]]);
            if m.det(f) != Fq::ZERO {
                out.push(m);
            }
        }
        out
    }

    /// All of M_2(F_q) in deterministic order.
    pub fn m2(f: &FieldSpec) -> Vec<FqMat2> {
        let q = f.q();
        let mut out = Vec::new();
        for code in 0..q.pow(4) {
            let mut c = code;
            let mut e = [Fq::ZERO; 4];
            for slot in e.iter_mut() {
                *slot = f.elem(c % q);
                c /= q;
            }
            out.push(FqMat2([[e[0], e[1]], [e[2], e[3]]]));
        }
        out
    }
}
