//! Harmonic numbers with a shared memo table.

use std::sync::{OnceLock, RwLock};

use crate::rational::Rational;

fn table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::zero()]))
}

/// `H_l = 1 + 1/2 + ... + 1/l`, with `H_0 = 0`.
pub fn harmonic(l: usize) -> Rational {
    {
        let t = table().read().expect("harmonic table poisoned");
        if let Some(h) = t.get(l) {
            return h.clone();
        }
    }
    let mut t = table().write().expect("harmonic table poisoned");
    while t.len() <= l {
        let n = t.len();
        let next = &t[n - 1] + Rational::unit_fraction(n as u64);
        t.push(next);
    }
    t[l].clone()
}

/// `H_{a+b} - H_a = sum_{i=1}^{b} 1/(a+i)`, computed directly without the memo.
pub fn harmonic_diff(a: usize, b: usize) -> Rational {
    (1..=b).map(|i| Rational::unit_fraction((a + i) as u64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn known_values() {
        assert_eq!(harmonic(0), Rational::zero());
        assert_eq!(harmonic(1), q(1, 1));
        assert_eq!(harmonic(2), q(3, 2));
        assert_eq!(harmonic(4), q(25, 12));
        assert_eq!(harmonic(5), q(137, 60));
        assert_eq!(harmonic(10), q(7381, 2520));
    }

    #[test]
    fn strictly_increasing_and_difference_identity() {
        for a in 0..40 {
            assert!(harmonic(a + 1) > harmonic(a));
            for b in 0..12 {
                assert_eq!(harmonic(a + b) - harmonic(a), harmonic_diff(a, b));
            }
        }
    }

    #[test]
    fn concurrent_readers_agree() {
        let handles: Vec<_> = (0..8)
            .map(|k| std::thread::spawn(move || harmonic(50 + k * 7)))
            .collect();
        for (k, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), harmonic(50 + k * 7));
        }
    }
}
