//! Finite certificates of the branch structure of `U`: the nine commutator
//! identities witnessing regular branching over `U'''`, and self-replication.

use std::fmt;

use super::{decompose_u, UniversalGroup};
use crate::words::{reduced_words_of_length, Letter, Word};

/// Expected value of one first-level section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinate {
    Trivial,
    Equals(&'static str, Word),
    /// Left unspecified; never checked.
    Unchecked,
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::Trivial => f.write_str("1"),
            Coordinate::Equals(name, _) => f.write_str(name),
            Coordinate::Unchecked => f.write_str("*"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchCheck {
    pub name: String,
    pub formula: String,
    pub word: Word,
    pub pattern: Vec<Coordinate>,
    pub passed: bool,
    /// The first coordinate that failed, if any.
    pub failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BranchReport {
    pub checks: Vec<BranchCheck>,
}

impl BranchReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn first_failure(&self) -> Option<&BranchCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Parses a bracket expression such as `[[(ab)^2,b],[b,(ca)^2]]`.
///
/// Terms are generator letters, `(xy)^n` powers, and commutators
/// `[x, y] = x⁻¹ y⁻¹ x y`.
pub fn parse_bracket(text: &str) -> Word {
    fn term(s: &[u8], i: &mut usize) -> Word {
        match s[*i] {
            b'[' => {
                *i += 1;
                let x = term(s, i);
                assert_eq!(s[*i], b',', "expected ',' in bracket");
                *i += 1;
                let y = term(s, i);
                assert_eq!(s[*i], b']', "expected ']' in bracket");
                *i += 1;
                Word::commutator(&x, &y)
            }
            b'(' => {
                let close = *i + s[*i..].iter().position(|&c| c == b')').expect("unclosed '('");
                let base = Word::parse(std::str::from_utf8(&s[*i + 1..close]).unwrap()).expect("letters");
                *i = close + 1;
                let mut exp = 1;
                if s.get(*i) == Some(&b'^') {
                    *i += 1;
                    let start = *i;
                    while *i < s.len() && s[*i].is_ascii_digit() {
                        *i += 1;
                    }
                    exp = std::str::from_utf8(&s[start..*i]).unwrap().parse().expect("exponent");
                }
                base.pow(exp)
            }
            c => {
                *i += 1;
                Word::letter(Letter::from_char(c as char).expect("generator letter"))
            }
        }
    }
    let bytes: Vec<u8> = text.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
    let mut i = 0;
    let w = term(&bytes, &mut i);
    assert_eq!(i, bytes.len(), "trailing input in {text}");
    w
}

/// `t = [(ab)², (ac)²]`, `v = [(ab)², (ad)²]`, `w = [(ac)², (ad)²]`.
pub fn branch_generators() -> (Word, Word, Word) {
    (
        parse_bracket("[(ab)^2,(ac)^2]"),
        parse_bracket("[(ab)^2,(ad)^2]"),
        parse_bracket("[(ac)^2,(ad)^2]"),
    )
}

/// The nine elements `h₁ … h₉` with their expected section patterns.
///
/// `h₅` is taken as `[[d,(ba)^2],[b,(da)^2]]`, the coordinate-1 analogue of
/// `h₈`. The often quoted `[[d,(ad)^2],[b,(ba)^2]]` has section `(adacab)²`
/// at coordinate 1, which is not `v`.
pub fn branch_table() -> Vec<(String, String, Word, Vec<Coordinate>)> {
    use Coordinate::{Trivial as I, Unchecked as S};
    let (t, v, w) = branch_generators();
    let tt = || Coordinate::Equals("t", t.clone());
    let vv = || Coordinate::Equals("v", v.clone());
    let ww = || Coordinate::Equals("w", w.clone());
    vec![
        ("h1", "[[(ab)^2,b],[b,(ca)^2]]", vec![tt(), S, I, I, I, I]),
        ("h2", "[[(ab)^2,b],[c,(da)^2]]", vec![vv(), I, I, I, S, I]),
        ("h3", "[[c,(ca)^2],[b,(da)^2]]", vec![ww(), I, I, I, I, S]),
        ("h4", "[[b,(ba)^2],[d,(ca)^2]]", vec![I, tt(), I, S, I, I]),
        ("h5", "[[d,(ba)^2],[b,(da)^2]]", vec![I, vv(), I, I, S, I]),
        ("h6", "[[d,(ca)^2],[b,(da)^2]]", vec![I, ww(), I, I, I, S]),
        ("h7", "[[c,(ba)^2],[d,(ca)^2]]", vec![I, I, tt(), S, I, I]),
        ("h8", "[[d,(ba)^2],[c,(da)^2]]", vec![I, I, vv(), I, S, I]),
        ("h9", "[[c,(ca)^2],[d,(da)^2]]", vec![I, I, ww(), I, I, S]),
    ]
    .into_iter()
    .map(|(n, f, p)| (n.to_string(), f.to_string(), parse_bracket(f), p))
    .collect()
}

/// Checks every `hᵢ` by exact equality in `U`: identity root permutation and
/// each specified section equal to `1`, `t`, `v` or `w`.
pub fn verify_branch_identities() -> BranchReport {
    let group = UniversalGroup::new();
    let checks = branch_table()
        .into_iter()
        .map(|(name, formula, word, pattern)| {
            let d = decompose_u(&word);
            let mut failure = None;
            if d.swaps() {
                failure = Some("root permutation is not the identity".to_string());
            }
            for (i, expected) in pattern.iter().enumerate() {
                if failure.is_some() {
                    break;
                }
                let ok = match expected {
                    Coordinate::Trivial => group.is_trivial(&d.sections[i]),
                    Coordinate::Equals(_, target) => group.equal(&d.sections[i], target),
                    Coordinate::Unchecked => true,
                };
                if !ok {
                    failure = Some(format!("coordinate {i}: expected {expected}, got {}", d.sections[i]));
                }
            }
            BranchCheck {
                name,
                formula,
                word,
                pattern,
                passed: failure.is_none(),
                failure,
            }
        })
        .collect();
    BranchReport { checks }
}

/// Shortlex search for `h ∈ St_U(1)` of length at most `max_len` whose section
/// at `index` equals `target` in `U`.
///
/// `St_U(1)` is generated by `b, c, d, aba, aca, ada`, which are exactly the
/// reduced words with an even number of `a`s; `None` only means the budget ran out.
pub fn self_replicating_witness(target: &Word, index: usize, max_len: usize) -> Option<Word> {
    assert!(index < 6, "letters of the 6-ary tree are 0..5");
    let group = UniversalGroup::new();
    (0..=max_len)
        .flat_map(reduced_words_of_length)
        .filter(|h| h.a_count() % 2 == 0)
        .find(|h| group.equal(&decompose_u(h).sections[index], target))
}
