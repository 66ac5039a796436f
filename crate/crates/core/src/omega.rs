//! Parameter sequences `ω ∈ {0,1,2}^ℕ`, the shift, the classes `Ω₀`, `Ω_∞`,
//! `Ω_M`, letterwise-permutation equivalence and the `Λ_{r₁,…,r_k}` families.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::periodic::Periodic;

/// An eventually periodic sequence over `{0, 1, 2}` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaSeq(Periodic);

impl OmegaSeq {
    pub fn new(prefix: Vec<u8>, period: Vec<u8>) -> Result<OmegaSeq, Error> {
        if prefix.iter().chain(&period).any(|&x| x > 2) {
            return Err(Error::InvalidArgument("omega letters must be 0, 1 or 2".into()));
        }
        Periodic::new(prefix, period).map(OmegaSeq)
    }

    /// `(period)^∞`.
    pub fn periodic(period: &[u8]) -> OmegaSeq {
        OmegaSeq::new(Vec::new(), period.to_vec()).expect("valid period")
    }

    /// The constant sequence `xxx…`.
    pub fn constant(x: u8) -> OmegaSeq {
        OmegaSeq::periodic(&[x])
    }

    pub fn parse(text: &str) -> Result<OmegaSeq, Error> {
        Periodic::parse(text, 3).map(OmegaSeq)
    }

    pub fn as_periodic(&self) -> &Periodic {
        &self.0
    }

    pub fn prefix(&self) -> &[u8] {
        self.0.prefix()
    }

    pub fn period(&self) -> &[u8] {
        self.0.period()
    }

    /// `ω_{i+1}` in one-based notation.
    pub fn at(&self, i: usize) -> u8 {
        self.0.at(i)
    }

    pub fn first(&self) -> u8 {
        self.0.first()
    }

    pub fn take(&self, n: usize) -> Vec<u8> {
        self.0.take(n)
    }

    /// The shift `τ`.
    pub fn shift(&self) -> OmegaSeq {
        OmegaSeq(self.0.shift())
    }

    pub fn shift_by(&self, n: usize) -> OmegaSeq {
        (0..n).fold(self.clone(), |s, _| s.shift())
    }

    pub fn prepend(&self, x: u8) -> OmegaSeq {
        OmegaSeq(self.0.prepend(x))
    }

    pub fn to_text(&self) -> String {
        self.0.to_text()
    }

    pub fn classify(&self, m: usize) -> OmegaClass {
        let period = self.period();
        let in_omega0 = period.len() == 1;
        let in_omega_inf = (0..3).all(|x| period.contains(&x));
        // Windows starting past prefix + one period repeat earlier ones.
        let starts = self.prefix().len() + period.len();
        let in_omega_m = m >= 1
            && (0..starts).all(|s| {
                let mut seen = [false; 3];
                for i in s..s + m {
                    seen[self.at(i) as usize] = true;
                }
                seen.iter().all(|&b| b)
            });
        OmegaClass {
            in_omega0,
            in_omega_inf,
            in_omega_m,
        }
    }

    /// Letterwise image under a permutation of `{0,1,2}` given as an image table.
    pub fn permute(&self, sigma: [u8; 3]) -> OmegaSeq {
        OmegaSeq(self.0.map_letters(|x| sigma[x as usize]))
    }

    /// `ω ∼ η`: some permutation of `{0,1,2}` maps `ω` onto `η` letter by letter.
    pub fn equivalent(&self, other: &OmegaSeq) -> bool {
        PERMUTATIONS.iter().any(|&s| self.permute(s) == *other)
    }
}

pub(crate) const PERMUTATIONS: [[u8; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl fmt::Display for OmegaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for OmegaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Omega({})", self.to_text())
    }
}

impl FromStr for OmegaSeq {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OmegaSeq::parse(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaClass {
    /// Eventually constant.
    pub in_omega0: bool,
    /// Every letter occurs infinitely often.
    pub in_omega_inf: bool,
    /// Every window of the requested length contains all three letters.
    pub in_omega_m: bool,
}

/// `Λ_{r₁,…,r_k} = { (012)^{r₁} η₁ ⋯ (012)^{r_k} η_k (012)^∞ }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaFamily {
    pub r_values: Vec<u32>,
    pub members: BTreeSet<OmegaSeq>,
}

impl LambdaFamily {
    pub fn new(r_values: &[u32]) -> Result<LambdaFamily, Error> {
        if r_values.contains(&0) {
            return Err(Error::Precondition("all r values must be at least 1".into()));
        }
        let k = r_values.len();
        let mut members = BTreeSet::new();
        for choice in 0..3usize.pow(k as u32) {
            let mut c = choice;
            let mut prefix = Vec::new();
            for &r in r_values {
                for _ in 0..r {
                    prefix.extend_from_slice(&[0, 1, 2]);
                }
                prefix.push((c % 3) as u8);
                c /= 3;
            }
            members.insert(OmegaSeq::new(prefix, vec![0, 1, 2]).expect("valid letters"));
        }
        Ok(LambdaFamily {
            r_values: r_values.to_vec(),
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &OmegaSeq> {
        self.members.iter()
    }
}

pub fn lambda_family(r: &[u32]) -> Result<LambdaFamily, Error> {
    LambdaFamily::new(r)
}
