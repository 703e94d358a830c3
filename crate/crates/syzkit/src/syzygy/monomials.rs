//! Quadratic and cubic monomials in `k` variables, graded lexicographic
//! with `X1 > … > Xk`. A quadratic `X_aX_b` (`a ≤ b`) sits at
//! `a·k − a(a−1)/2 + (b−a)`; cubics `X_aX_bX_c` (`a ≤ b ≤ c`) are ranked
//! lexicographically on the sorted triple.

#[derive(Clone, Debug)]
pub struct Monomials {
    k: usize,
    quadratic: Vec<(usize, usize)>,
    cubic_offset: Vec<usize>,
}

impl Monomials {
    pub fn new(k: usize) -> Monomials {
        let quadratic = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
        // Cubics with first variable a number C(k−a+1, 2).
        let mut cubic_offset = Vec::with_capacity(k + 1);
        let mut acc = 0;
        for a in 0..=k {
            cubic_offset.push(acc);
            let m = k - a.min(k);
            acc += m * (m + 1) / 2;
        }
        Monomials {
            k,
            quadratic,
            cubic_offset,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn quadratic(&self) -> &[(usize, usize)] {
        &self.quadratic
    }

    /// Index of `X_aX_b` in either argument order.
    #[inline]
    pub fn quadratic_index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        a * self.k - a * a.saturating_sub(1) / 2 + (b - a)
    }

    pub fn cubic_count(&self) -> usize {
        self.k * (self.k + 1) * (self.k + 2) / 6
    }

    /// Index of `X_aX_bX_c` in any argument order.
    #[inline]
    pub fn cubic_index(&self, a: usize, b: usize, c: usize) -> usize {
        let mut v = [a, b, c];
        v.sort_unstable();
        let [a, b, c] = v;
        // Within first variable a: quadratics in the k − a variables a..k.
        let m = self.k - a;
        let (i, j) = (b - a, c - a);
        self.cubic_offset[a] + i * m - i * i.saturating_sub(1) / 2 + (j - i)
    }

    /// Sorted triples in index order.
    pub fn cubic(&self) -> Vec<(usize, usize, usize)> {
        let k = self.k;
        (0..k)
            .flat_map(|a| (a..k).flat_map(move |b| (b..k).map(move |c| (a, b, c))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_enumerate_in_order() {
        for k in 1..9 {
            let m = Monomials::new(k);
            for (i, &(a, b)) in m.quadratic().iter().enumerate() {
                assert_eq!(m.quadratic_index(a, b), i);
                assert_eq!(m.quadratic_index(b, a), i);
            }
            let cubic = m.cubic();
            assert_eq!(cubic.len(), m.cubic_count());
            for (i, &(a, b, c)) in cubic.iter().enumerate() {
                assert_eq!(m.cubic_index(c, a, b), i);
            }
        }
    }
}
