//! Dense exact linear algebra over GF(q): reduced row echelon form,
//! rank, determinants, maximal minors, null spaces, and the canonical
//! [`CodeKey`] that identifies a linear code.

use itertools::Itertools;

use crate::gf::{Field, FieldElement};
use crate::{Error, Result};

/// A dense matrix over GF(q), stored row major.
#[derive(Clone)]
pub struct MatrixGF {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<FieldElement>,
}

impl std::fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MatrixGF {}x{} over GF({})", self.rows, self.cols, self.field.q())?;
        for r in 0..self.rows {
            let row: Vec<u8> = (0..self.cols).map(|c| self.get(r, c).0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl PartialEq for MatrixGF {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.field.q() == other.field.q()
            && self.entries == other.entries
    }
}

impl Eq for MatrixGF {}

impl MatrixGF {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Self {
        MatrixGF {
            rows,
            cols,
            field: field.clone(),
            entries: vec![FieldElement(0); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement(1));
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut m = Self::zero(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<FieldElement>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        MatrixGF {
            rows: rows.len(),
            cols,
            field: field.clone(),
            entries: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Entries as raw table indices, row major.
    pub fn bytes(&self) -> Vec<u8> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn transpose(&self) -> MatrixGF {
        MatrixGF::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &MatrixGF) -> MatrixGF {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.field.q(), other.field.q(), "field mismatch");
        let k = &self.field;
        MatrixGF::from_fn(&self.field, self.rows, other.cols, |r, c| {
            let mut acc = FieldElement(0);
            for i in 0..self.cols {
                acc = k.add(acc, k.mul(self.get(r, i), other.get(i, c)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len());
        let k = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = FieldElement(0);
                for c in 0..self.cols {
                    acc = k.add(acc, k.mul(self.get(r, c), v[c]));
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: FieldElement) -> MatrixGF {
        let k = &self.field;
        MatrixGF {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            entries: self.entries.iter().map(|&e| k.mul(s, e)).collect(),
        }
    }

    /// Submatrix keeping the given columns in order.
    pub fn select_columns(&self, cols: &[usize]) -> MatrixGF {
        MatrixGF::from_fn(&self.field, self.rows, cols.len(), |r, c| {
            self.get(r, cols[c])
        })
    }

    /// Unique reduced row echelon form together with the rank.
    pub fn rref(&self) -> (MatrixGF, usize) {
        let mut buf: Vec<u8> = self.entries.iter().map(|e| e.0).collect();
        let rank = rref_bytes(&self.field, self.rows, self.cols, &mut buf);
        let m = MatrixGF {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            entries: buf.into_iter().map(FieldElement).collect(),
        };
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        let mut buf: Vec<u8> = self.entries.iter().map(|e| e.0).collect();
        rref_bytes(&self.field, self.rows, self.cols, &mut buf)
    }

    /// Determinant of a square matrix by Gaussian elimination.
    pub fn det(&self) -> FieldElement {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut buf: Vec<u8> = self.entries.iter().map(|e| e.0).collect();
        FieldElement(det_bytes(&self.field, self.rows, &mut buf))
    }

    /// Inverse of a square matrix, or None when singular.
    pub fn inverse(&self) -> Option<MatrixGF> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = vec![0u8; n * 2 * n];
        for r in 0..n {
            for c in 0..n {
                aug[r * 2 * n + c] = self.get(r, c).0;
            }
            aug[r * 2 * n + n + r] = 1;
        }
        let rank = rref_bytes(&self.field, n, 2 * n, &mut aug);
        if rank < n || (0..n).any(|i| aug[i * 2 * n + i] != 1) {
            return None;
        }
        Some(MatrixGF::from_fn(&self.field, n, n, |r, c| {
            FieldElement(aug[r * 2 * n + n + c])
        }))
    }

    /// True when every maximal k x k minor is nonzero.
    ///
    /// Minors are evaluated by Gaussian elimination per column subset in
    /// lexicographic order, returning false at the first zero minor.
    pub fn is_mds(&self) -> Result<bool> {
        let k = self.rows;
        if k > self.cols || self.rank() < k {
            return Err(Error::NotFullRank);
        }
        let mut buf = vec![0u8; k * k];
        for subset in (0..self.cols).combinations(k) {
            for (j, &c) in subset.iter().enumerate() {
                for r in 0..k {
                    buf[r * k + j] = self.get(r, c).0;
                }
            }
            if det_bytes(&self.field, k, &mut buf) == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Basis of the right null space as the rows of an (n-k) x n matrix
    /// of full rank, with `self * basis^T = 0`.
    pub fn null_space_basis(&self) -> Result<MatrixGF> {
        let (r, rank) = self.rref();
        if rank < self.rows {
            return Err(Error::NotFullRank);
        }
        let n = self.cols;
        let k = self.rows;
        let field = &self.field;
        let mut pivots = Vec::with_capacity(k);
        let mut col = 0;
        for row in 0..k {
            while col < n && r.get(row, col).is_zero() {
                col += 1;
            }
            pivots.push(col);
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = MatrixGF::zero(&self.field, n - k, n);
        for (i, &fc) in free.iter().enumerate() {
            basis.set(i, fc, FieldElement(1));
            for (row, &pc) in pivots.iter().enumerate() {
                basis.set(i, pc, field.neg(r.get(row, fc)));
            }
        }
        Ok(basis)
    }

    /// Canonical identity of the code generated by the rows.
    ///
    /// Requires full row rank; the key is the reduced row echelon form
    /// serialized row major, so two generator matrices share a key exactly
    /// when they have the same row space.
    pub fn code_key(&self) -> Result<CodeKey> {
        let (r, rank) = self.rref();
        if rank < self.rows {
            return Err(Error::NotFullRank);
        }
        Ok(CodeKey {
            q: self.field.q(),
            k: self.rows as u16,
            n: self.cols as u16,
            bytes: r.bytes(),
        })
    }
}

/// In-place reduced row echelon form on raw index bytes; returns rank.
pub(crate) fn rref_bytes(field: &Field, rows: usize, cols: usize, m: &mut [u8]) -> usize {
    debug_assert_eq!(m.len(), rows * cols);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(pr) = (pivot_row..rows).find(|&r| m[r * cols + col] != 0) else {
            continue;
        };
        if pr != pivot_row {
            for c in 0..cols {
                m.swap(pr * cols + c, pivot_row * cols + c);
            }
        }
        let lead = m[pivot_row * cols + col];
        if lead != 1 {
            let inv = field.inv_idx(lead);
            for c in col..cols {
                m[pivot_row * cols + c] = field.mul_idx(inv, m[pivot_row * cols + c]);
            }
        }
        for r in 0..rows {
            if r == pivot_row {
                continue;
            }
            let factor = m[r * cols + col];
            if factor != 0 {
                for c in col..cols {
                    let delta = field.mul_idx(factor, m[pivot_row * cols + c]);
                    m[r * cols + c] = field.sub_idx(m[r * cols + c], delta);
                }
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

/// Determinant of an n x n matrix of raw index bytes; clobbers the buffer.
pub(crate) fn det_bytes(field: &Field, n: usize, m: &mut [u8]) -> u8 {
    debug_assert_eq!(m.len(), n * n);
    let mut det: u8 = 1;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return 0;
        };
        if pr != col {
            for c in 0..n {
                m.swap(pr * n + c, col * n + c);
            }
            det = field.neg_idx(det);
        }
        let lead = m[col * n + col];
        det = field.mul_idx(det, lead);
        let inv = field.inv_idx(lead);
        for r in col + 1..n {
            let factor = m[r * n + col];
            if factor != 0 {
                let scale = field.mul_idx(factor, inv);
                for c in col..n {
                    let delta = field.mul_idx(scale, m[col * n + c]);
                    m[r * n + c] = field.sub_idx(m[r * n + c], delta);
                }
            }
        }
    }
    det
}

/// Canonical identity of a linear code: the reduced row echelon form of a
/// full-rank generator matrix, serialized row major.
///
/// For an MDS code the key coincides with the systematic form `[I_k | A]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CodeKey {
    q: u64,
    k: u16,
    n: u16,
    bytes: Vec<u8>,
}

impl CodeKey {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn canonical_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Pack the canonical bytes into a single integer when they fit:
    /// 4 bits per entry for q <= 16, 8 bits otherwise. Within a fixed
    /// (q, k, n) enumeration the packing is injective, so deduplication
    /// on packed keys is exact.
    pub fn packed(&self) -> Option<u128> {
        pack_bytes(self.q, &self.bytes)
    }

    /// Rebuild the generator matrix from the canonical bytes.
    pub fn matrix(&self, field: &Field) -> Result<crate::MatrixGF> {
        if field.q() != self.q {
            return Err(Error::FieldMismatch);
        }
        let k = self.k as usize;
        let n = self.n as usize;
        Ok(MatrixGF::from_fn(&field, k, n, |r, c| {
            FieldElement(self.bytes[r * n + c])
        }))
    }

    pub(crate) fn from_parts(q: u64, k: usize, n: usize, bytes: Vec<u8>) -> CodeKey {
        CodeKey {
            q,
            k: k as u16,
            n: n as u16,
            bytes,
        }
    }
}

pub(crate) fn pack_bytes(q: u64, bytes: &[u8]) -> Option<u128> {
    if q <= 16 && bytes.len() <= 32 {
        let mut acc: u128 = 0;
        for &b in bytes {
            acc = (acc << 4) | u128::from(b);
        }
        Some(acc)
    } else if bytes.len() <= 16 {
        let mut acc: u128 = 0;
        for &b in bytes {
            acc = (acc << 8) | u128::from(b);
        }
        Some(acc)
    } else {
        None
    }
}

pub(crate) fn unpack_bytes(q: u64, len: usize, mut packed: u128) -> Vec<u8> {
    let mut out = vec![0u8; len];
    if q <= 16 && len <= 32 {
        for b in out.iter_mut().rev() {
            *b = (packed & 0xf) as u8;
            packed >>= 4;
        }
    } else {
        for b in out.iter_mut().rev() {
            *b = (packed & 0xff) as u8;
            packed >>= 8;
        }
    }
    out
}
