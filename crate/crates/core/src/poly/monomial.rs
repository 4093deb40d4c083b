use std::cmp::Ordering;
use std::fmt;

/// Exponent vector `x_0^{e_0} ... x_{n-1}^{e_{n-1}}`.
///
/// Ordering is graded reverse lexicographic: higher total degree first, ties
/// broken in favour of the smaller exponent in the last differing variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of the variables that occur with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub(crate) fn with_exponent(&self, i: usize, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] = e;
        Monomial { exps }
    }

    pub(crate) fn removed(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.remove(i);
        Monomial { exps }
    }

    pub(crate) fn inserted(&self, i: usize, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        exps.insert(i, e);
        Monomial { exps }
    }

    pub(crate) fn extended(&self, nvars: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.resize(nvars, 0);
        Monomial { exps }
    }

    /// All monomials of total degree exactly `d` in `nvars` variables,
    /// listed from the largest to the smallest in degrevlex.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            let n = cur.len();
            if pos + 1 == n {
                cur[pos] = left;
                out.push(Monomial { exps: cur.clone() });
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial { exps: vec![] });
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// All monomials of total degree at most `d`, largest first.
    pub fn all_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        (0..=d)
            .rev()
            .flat_map(|k| Monomial::all_of_degree(nvars, k))
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_order() {
        let m = |e: &[u32]| Monomial::new(e.to_vec());
        // higher degree wins
        assert!(m(&[0, 0, 2]) > m(&[1, 0, 0]));
        // x0*x2 < x1^2 in degrevlex on 3 variables
        assert!(m(&[1, 0, 1]) < m(&[0, 2, 0]));
        assert!(m(&[2, 0, 0]) > m(&[0, 2, 0]));
        assert!(m(&[1, 1, 0]) > m(&[0, 2, 0]));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Monomial::all_of_degree(4, 3).len(), 20);
        assert_eq!(Monomial::all_up_to_degree(3, 2).len(), 10);
        let ms = Monomial::all_of_degree(3, 2);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
    }
}
