//! Eventually periodic sequences `prefix · period^∞` over a small alphabet.
//!
//! Shared by parameter sequences (alphabet `{0,1,2}`) and boundary rays of
//! the binary tree (alphabet `{0,1}`).

use std::fmt;

use crate::error::Error;

/// Canonical `prefix · period^∞`.
///
/// Canonical means the period is primitive and the last prefix letter differs
/// from the last period letter, so two values are equal iff they denote the
/// same infinite sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Periodic {
    prefix: Vec<u8>,
    period: Vec<u8>,
}

impl Periodic {
    pub fn new(prefix: Vec<u8>, period: Vec<u8>) -> Result<Periodic, Error> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("period must be nonempty".into()));
        }
        Ok(Self::canonical(prefix, period))
    }

    pub(crate) fn canonical(mut prefix: Vec<u8>, mut period: Vec<u8>) -> Periodic {
        assert!(!period.is_empty());
        let n = period.len();
        if let Some(p) = (1..=n).find(|&p| n.is_multiple_of(p) && (0..n).all(|i| period[i] == period[i % p])) {
            period.truncate(p);
        }
        while let (Some(&x), Some(&y)) = (prefix.last(), period.last()) {
            if x != y {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Periodic { prefix, period }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Letter at 0-based position `i`.
    pub fn at(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn first(&self) -> u8 {
        self.at(0)
    }

    /// First `n` letters.
    pub fn take(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// Drops the first letter.
    pub fn shift(&self) -> Periodic {
        if self.prefix.is_empty() {
            let mut period = self.period.clone();
            period.rotate_left(1);
            Periodic { prefix: Vec::new(), period }
        } else {
            Periodic {
                prefix: self.prefix[1..].to_vec(),
                period: self.period.clone(),
            }
        }
    }

    pub fn prepend(&self, x: u8) -> Periodic {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(x);
        prefix.extend_from_slice(&self.prefix);
        Self::canonical(prefix, self.period.clone())
    }

    pub fn map_letters(&self, f: impl Fn(u8) -> u8) -> Periodic {
        Self::canonical(
            self.prefix.iter().map(|&x| f(x)).collect(),
            self.period.iter().map(|&x| f(x)).collect(),
        )
    }

    /// Number of distinct shifts `τ^i` for `i ≥ 0`.
    pub fn orbit_len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Phase following phase `i` in the shift orbit (phases index `τ^i`).
    #[inline]
    pub fn next_phase(&self, i: usize) -> usize {
        if i + 1 < self.orbit_len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    /// Letters occurring in the sequence from phase `i` on.
    pub fn letters_from(&self, i: usize) -> Vec<u8> {
        let mut seen: Vec<u8> = self.prefix.iter().skip(i).chain(self.period.iter()).copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    }

    pub fn to_text(&self) -> String {
        let digits = |v: &[u8]| v.iter().map(|d| (b'0' + d) as char).collect::<String>();
        format!("{}|{}", digits(&self.prefix), digits(&self.period))
    }

    /// Parses `prefix|period` with letters below `alphabet`.
    pub fn parse(text: &str, alphabet: u8) -> Result<Periodic, Error> {
        let err = |reason: String| Error::Parse {
            token: text.to_string(),
            reason,
        };
        let (pre, per) = text
            .trim()
            .split_once('|')
            .ok_or_else(|| err("expected <prefix>|<period>".into()))?;
        let digits = |s: &str| -> Result<Vec<u8>, Error> {
            s.chars()
                .map(|c| match c.to_digit(10) {
                    Some(d) if (d as u8) < alphabet => Ok(d as u8),
                    _ => Err(err(format!("invalid symbol {c:?}"))),
                })
                .collect()
        };
        let prefix = digits(pre)?;
        let period = digits(per)?;
        if period.is_empty() {
            return Err(err("period must be nonempty".into()));
        }
        Ok(Self::canonical(prefix, period))
    }
}

impl fmt::Debug for Periodic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        let p = Periodic::new(vec![0, 1, 2], vec![0, 1, 2, 0, 1, 2]).unwrap();
        assert_eq!(p.to_text(), "|012");
        let q = Periodic::new(vec![1, 1, 1], vec![1]).unwrap();
        assert_eq!(q.to_text(), "|1");
        let r = Periodic::new(vec![0, 2], vec![0, 1, 2]).unwrap();
        assert_eq!(r.to_text(), "0|201");
        assert!(Periodic::new(vec![], vec![]).is_err());
    }

    #[test]
    fn parse_errors_name_token() {
        let e = Periodic::parse("01|3", 3).unwrap_err();
        assert!(e.to_string().contains("01|3"));
        assert!(Periodic::parse("012", 3).is_err());
        assert!(Periodic::parse("0|", 3).is_err());
    }

    fn seq() -> impl Strategy<Value = Periodic> {
        (
            prop::collection::vec(0u8..3, 0..6),
            prop::collection::vec(0u8..3, 1..5),
        )
            .prop_map(|(a, b)| Periodic::canonical(a, b))
    }

    proptest! {
        #[test]
        fn equality_is_sequence_equality(a in seq(), b in seq()) {
            let n = 2 * (a.orbit_len() + b.orbit_len()) + 12;
            prop_assert_eq!(a == b, a.take(n) == b.take(n));
        }

        #[test]
        fn shift_inverts_prepend(a in seq(), x in 0u8..3) {
            prop_assert_eq!(a.prepend(x).shift(), a.clone());
            prop_assert_eq!(a.prepend(x).first(), x);
        }

        #[test]
        fn phases_follow_shift(a in seq()) {
            let mut s = a.clone();
            let mut phase = 0;
            for _ in 0..20 {
                prop_assert_eq!(s.first(), a.at(phase));
                s = s.shift();
                phase = a.next_phase(phase);
            }
        }
    }
}
