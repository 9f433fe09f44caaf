//! Prime-field arithmetic on length-3 coefficient vectors.

use crate::error::Error;

/// A coefficient vector over GF(p). Entries are always reduced mod p.
pub type Vec3 = [u64; 3];

/// Arithmetic context for GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gf {
    p: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime that is at least `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut q = n.max(2);
    while !is_prime(q) {
        q += 1;
    }
    q
}

/// The unit vector α_i (0-based `i`).
pub fn alpha(i: usize) -> Vec3 {
    let mut v = [0; 3];
    v[i] = 1;
    v
}

/// The all-ones vector ᾱ.
pub const ALPHA_BAR: Vec3 = [1, 1, 1];

impl Gf {
    pub fn new(p: u64) -> Result<Self, Error> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidField(p));
        }
        Ok(Gf { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn vec(&self, v: [i64; 3]) -> Vec3 {
        [self.reduce(v[0]), self.reduce(v[1]), self.reduce(v[2])]
    }

    pub fn add_s(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub_s(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul_s(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    pub fn add(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        [self.add_s(a[0], b[0]), self.add_s(a[1], b[1]), self.add_s(a[2], b[2])]
    }

    pub fn scale(&self, c: u64, a: &Vec3) -> Vec3 {
        [self.mul_s(c, a[0]), self.mul_s(c, a[1]), self.mul_s(c, a[2])]
    }

    pub fn cross(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        [
            self.sub_s(self.mul_s(a[1], b[2]), self.mul_s(a[2], b[1])),
            self.sub_s(self.mul_s(a[2], b[0]), self.mul_s(a[0], b[2])),
            self.sub_s(self.mul_s(a[0], b[1]), self.mul_s(a[1], b[0])),
        ]
    }

    pub fn det(&self, a: &Vec3, b: &Vec3, c: &Vec3) -> u64 {
        let x = self.cross(b, c);
        (self.mul_s(a[0], x[0]) + self.mul_s(a[1], x[1]) + self.mul_s(a[2], x[2])) % self.p
    }

    /// Scales `v` so its first nonzero coordinate is 1. Zero stays zero.
    pub fn normalize(&self, v: &Vec3) -> Vec3 {
        match v.iter().find(|&&x| x != 0) {
            Some(&x) => self.scale(self.inv(x), v),
            None => [0; 3],
        }
    }

    pub fn independent(&self, a: &Vec3, b: &Vec3) -> bool {
        !is_zero(&self.cross(a, b))
    }

    /// Row-reduced basis of the span of `vs`.
    pub fn basis(&self, vs: &[Vec3]) -> Vec<Vec3> {
        let mut rows: Vec<Vec3> = Vec::with_capacity(3);
        for v in vs {
            let mut w = *v;
            for r in &rows {
                let piv = r.iter().position(|&x| x != 0).unwrap();
                if w[piv] != 0 {
                    let f = w[piv];
                    let s = self.scale(f, r);
                    w = [self.sub_s(w[0], s[0]), self.sub_s(w[1], s[1]), self.sub_s(w[2], s[2])];
                }
            }
            if !is_zero(&w) {
                let w = self.normalize(&w);
                let piv = w.iter().position(|&x| x != 0).unwrap();
                for r in rows.iter_mut() {
                    if r[piv] != 0 {
                        let f = r[piv];
                        let s = self.scale(f, &w);
                        *r = [self.sub_s(r[0], s[0]), self.sub_s(r[1], s[1]), self.sub_s(r[2], s[2])];
                    }
                }
                rows.push(w);
                if rows.len() == 3 {
                    break;
                }
            }
        }
        rows
    }

    pub fn rank(&self, vs: &[Vec3]) -> usize {
        self.basis(vs).len()
    }

    pub fn in_span(&self, v: &Vec3, vs: &[Vec3]) -> bool {
        if is_zero(v) {
            return true;
        }
        let b = self.basis(vs);
        let mut ext = b.clone();
        ext.push(*v);
        self.rank(&ext) == b.len()
    }

    /// Coefficients `c` with `target = Σ c_i vs[i]`, or `None`.
    ///
    /// Columns are eliminated left to right, so earlier generators are
    /// preferred as pivots and free columns get coefficient zero.
    pub fn solve(&self, target: &Vec3, vs: &[Vec3]) -> Option<Vec<u64>> {
        let m = vs.len();
        // Augmented 3 × (m+1) matrix, columns = generators then target.
        let mut a: Vec<Vec<u64>> = (0..3)
            .map(|r| {
                let mut row: Vec<u64> = vs.iter().map(|v| v[r]).collect();
                row.push(target[r]);
                row
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..m {
            if row == 3 {
                break;
            }
            let Some(pr) = (row..3).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(row, pr);
            let f = self.inv(a[row][col]);
            for x in a[row].iter_mut() {
                *x = self.mul_s(*x, f);
            }
            for r in 0..3 {
                if r != row && a[r][col] != 0 {
                    let g = a[r][col];
                    for c in 0..=m {
                        let s = self.mul_s(g, a[row][c]);
                        a[r][c] = self.sub_s(a[r][c], s);
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        if a.iter().skip(row).any(|r| r[m] != 0) {
            return None;
        }
        let mut c = vec![0; m];
        for (r, col) in pivots {
            c[col] = a[r][m];
        }
        Some(c)
    }

    /// All nonzero vectors of span(`vs`) up to scaling, one representative each.
    pub fn projective_points(&self, vs: &[Vec3]) -> Vec<Vec3> {
        let b = self.basis(vs);
        let p = self.p;
        let mut out = Vec::new();
        match b.len() {
            0 => {}
            1 => out.push(b[0]),
            2 => {
                out.push(b[1]);
                for t in 0..p {
                    out.push(self.add(&b[0], &self.scale(t, &b[1])));
                }
            }
            _ => {
                out.push(b[2]);
                for t in 0..p {
                    out.push(self.add(&b[1], &self.scale(t, &b[2])));
                }
                for s in 0..p {
                    for t in 0..p {
                        let v = self.add(&self.scale(s, &b[1]), &self.scale(t, &b[2]));
                        out.push(self.add(&b[0], &v));
                    }
                }
            }
        }
        out
    }
}

pub fn is_zero(v: &Vec3) -> bool {
    v.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_bar_not_in_two_coordinates() {
        let f = Gf::new(5).unwrap();
        assert!(!f.in_span(&ALPHA_BAR, &[alpha(0), alpha(1)]));
    }

    #[test]
    fn solve_pair_sum() {
        let f = Gf::new(5).unwrap();
        let c = f.solve(&ALPHA_BAR, &[[1, 1, 0], alpha(2)]).unwrap();
        assert_eq!(c, vec![1, 1]);
    }

    #[test]
    fn solve_without_solution_over_gf7() {
        let f = Gf::new(7).unwrap();
        let v = f.vec([0, 2, -1]);
        assert_eq!(f.solve(&ALPHA_BAR, &[alpha(0), v]), None);
        // Exhaustive cross-check.
        for c1 in 0..7 {
            for c2 in 0..7 {
                let s = f.add(&f.scale(c1, &alpha(0)), &f.scale(c2, &v));
                assert_ne!(s, ALPHA_BAR);
            }
        }
    }

    #[test]
    fn rejects_composite() {
        assert!(Gf::new(9).is_err());
        assert!(Gf::new(1).is_err());
    }

    #[test]
    fn projective_counts() {
        let f = Gf::new(3).unwrap();
        assert_eq!(f.projective_points(&[alpha(0)]).len(), 1);
        assert_eq!(f.projective_points(&[alpha(0), alpha(1)]).len(), 4);
        assert_eq!(f.projective_points(&[alpha(0), alpha(1), alpha(2)]).len(), 13);
    }

    #[test]
    fn next_prime_values() {
        assert_eq!(next_prime(5), 5);
        assert_eq!(next_prime(8), 11);
        assert_eq!(next_prime(0), 2);
    }
}
