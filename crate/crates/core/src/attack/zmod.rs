//! Dense linear algebra over the prime field `Z_p`.

use super::AttackError;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| !p.is_multiple_of(i))
}

/// Arithmetic tables for `Z_p` with `p < 256`, so matrix entries fit in a
/// byte and row operations are table lookups.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    inv: Vec<u8>,
    /// `axpy[f][a][b] = a - f*b mod p`, flattened.
    axpy: Vec<u8>,
}

impl Field {
    pub fn new(p: u32) -> Result<Self, AttackError> {
        if !is_prime(p) || p > 255 {
            return Err(AttackError::UnsupportedModulus(p));
        }
        let mut inv = vec![0u8; p as usize];
        for a in 1..p {
            inv[a as usize] = (1..p).find(|b| a * b % p == 1).expect("p is prime") as u8;
        }
        let ps = p as usize;
        let mut axpy = vec![0u8; ps * ps * ps];
        for f in 0..p {
            for a in 0..p {
                for b in 0..p {
                    axpy[(f as usize * ps + a as usize) * ps + b as usize] = ((a + p * p - f * b) % p) as u8;
                }
            }
        }
        Ok(Self { p, inv, axpy })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        (a as u32 * b as u32 % self.p) as u8
    }

    /// `dst[c] -= f * src[c]` for every `c`.
    #[inline]
    pub fn sub_scaled(&self, dst: &mut [u8], src: &[u8], f: u8) {
        let ps = self.p as usize;
        let table = &self.axpy[f as usize * ps * ps..(f as usize + 1) * ps * ps];
        for (a, &b) in dst.iter_mut().zip(src) {
            *a = table[*a as usize * ps + b as usize];
        }
    }

    pub fn scale(&self, row: &mut [u8], f: u8) {
        for a in row.iter_mut() {
            *a = self.mul(*a, f);
        }
    }
}

/// Row-major matrix over `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u32>], p: u32) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (c, &v) in row.iter().enumerate() {
                m.data[i * cols + c] = (v % p) as u8;
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, c: usize) -> u8 {
        self.data[i * self.cols + c]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            let (head, tail) = self.data.split_at_mut(hi * self.cols);
            head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
        }
    }

    /// Two disjoint rows, the first mutable.
    fn pair_mut(&mut self, dst: usize, src: usize) -> (&mut [u8], &[u8]) {
        let cols = self.cols;
        if dst < src {
            let (head, tail) = self.data.split_at_mut(src * cols);
            (&mut head[dst * cols..(dst + 1) * cols], &tail[..cols])
        } else {
            let (head, tail) = self.data.split_at_mut(dst * cols);
            (&mut tail[..cols], &head[src * cols..(src + 1) * cols])
        }
    }

    /// Reduced row echelon form over the first `limit` columns (the rest are
    /// carried along, e.g. an augmented right-hand side). Returns the pivot
    /// columns.
    pub fn rref(&mut self, field: &Field, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            self.swap_rows(r, pr);
            let inv = field.inv(self.get(r, c));
            let cols = self.cols;
            field.scale(&mut self.data[r * cols + c..(r + 1) * cols], inv);
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i != r && f != 0 {
                    let (dst, src) = self.pair_mut(i, r);
                    field.sub_scaled(&mut dst[c..], &src[c..], f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank, with early exit once it is known the matrix cannot reach
    /// `min(rows, cols)`. Destroys the contents.
    pub fn is_full_rank(&mut self, field: &Field) -> bool {
        let target = self.rows.min(self.cols);
        let mut r = 0;
        for c in 0..self.cols {
            if r == target {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                // square case: a column without pivot means rank < n
                if self.rows >= self.cols {
                    return false;
                }
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inv(self.get(r, c));
            let cols = self.cols;
            field.scale(&mut self.data[r * cols + c..(r + 1) * cols], inv);
            for i in r + 1..self.rows {
                let f = self.get(i, c);
                if f != 0 {
                    let (dst, src) = self.pair_mut(i, r);
                    field.sub_scaled(&mut dst[c..], &src[c..], f);
                }
            }
            r += 1;
        }
        r == target
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.clone();
        m.rref(field, self.cols).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u32> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(matches!(Field::new(6), Err(AttackError::UnsupportedModulus(6))));
    }

    #[test]
    fn inverses() {
        let f = Field::new(7).unwrap();
        for a in 1..7u8 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn rank_of_known_matrices() {
        let f = Field::new(5).unwrap();
        // third row = first + 2 * second (mod 5)
        let m = Matrix::from_rows(3, &[vec![1, 2, 3], vec![0, 1, 4], vec![1, 4, 1]], 5);
        assert_eq!(m.rank(&f), 2);
        assert!(!m.clone().is_full_rank(&f));
        let id = Matrix::from_rows(3, &[vec![1, 0, 0], vec![0, 3, 0], vec![2, 0, 4]], 5);
        assert_eq!(id.rank(&f), 3);
        assert!(id.clone().is_full_rank(&f));
        // singular over Z_2 only
        let m2 = Matrix::from_rows(2, &[vec![1, 1], vec![1, 3]], 2);
        assert_eq!(m2.rank(&Field::new(2).unwrap()), 1);
        assert_eq!(Matrix::from_rows(2, &[vec![1, 1], vec![1, 3]], 5).rank(&f), 2);
    }

    #[test]
    fn rref_solves_a_system() {
        let f = Field::new(5).unwrap();
        // x + y = 3, x + 2y = 0  =>  y = 2, x = 1
        let mut m = Matrix::from_rows(3, &[vec![1, 1, 3], vec![1, 2, 0]], 5);
        assert_eq!(m.rref(&f, 2), vec![0, 1]);
        assert_eq!(m.row(0), &[1, 0, 1]);
        assert_eq!(m.row(1), &[0, 1, 2]);
    }
}
