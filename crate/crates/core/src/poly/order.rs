use std::cmp::Ordering;

use super::monomial::Monomial;

/// Monomial orders. `Block(sizes)` compares consecutive blocks of variables
/// lexicographically, using degrevlex inside each block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    Block(Vec<usize>),
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::DegRevLex
    }
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => {
                if a.deg() != b.deg() {
                    return a.deg().cmp(&b.deg());
                }
                for i in (0..a.nvars()).rev() {
                    if a.exp(i) != b.exp(i) {
                        return b.exp(i).cmp(&a.exp(i));
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Lex => a.exps().cmp(b.exps()),
            MonomialOrder::Block(sizes) => {
                let mut lo = 0;
                for s in sizes {
                    let hi = (lo + s).min(a.nvars());
                    let c = a.grevlex_range(b, lo, hi);
                    if c != Ordering::Equal {
                        return c;
                    }
                    lo = hi;
                }
                if lo < a.nvars() {
                    return a.grevlex_range(b, lo, a.nvars());
                }
                Ordering::Equal
            }
        }
    }

    /// The elimination order that puts the first `k` variables above the rest.
    pub fn elimination(k: usize, n: usize) -> MonomialOrder {
        MonomialOrder::Block(vec![k, n - k])
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::DegRevLex => "degrevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Block(s) => {
                let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                format!("block({})", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exps(e.to_vec())
    }

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::DegRevLex;
        // x*z < y^2 in grevlex with x > y > z
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 2]), &m(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn block_eliminates() {
        let o = MonomialOrder::elimination(1, 3);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1, 0]), &m(&[1, 0, 1])), Ordering::Greater);
    }
}
