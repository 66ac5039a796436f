//! The universal group `U` realized as an automaton group on the 6-ary tree.
//!
//! Letters are pairs `(bit, trit) ∈ {0,1} × {0,1,2}` numbered `3·bit + trit`.
//! The generators are
//!
//! ```text
//! a = (0 3)(1 4)(2 5) (ε, ε, ε, ε, ε, ε)
//! b =                 (a, a, ε, b, b, b)
//! c =                 (a, ε, a, c, c, c)
//! d =                 (ε, a, a, d, d, d)
//! ```
//!
//! Restricting to the binary subtree `T_ω = {(u, ω^u)}` and projecting to the
//! first coordinates gives the marked epimorphism `ψ_ω : U → G_ω`.

pub mod branch;

use std::collections::HashMap;
use std::fmt;

use dashmap::DashMap;

use crate::error::Error;
use crate::gomega::{act_g, selector_is_a, BinVertex};
use crate::omega::OmegaSeq;
use crate::words::{Letter, Word, WordBuilder};

pub use branch::{
    branch_generators, branch_table, parse_bracket, self_replicating_witness, verify_branch_identities, BranchCheck,
    BranchReport, Coordinate,
};

/// Image of a letter under the root permutation of `a`.
#[inline]
pub fn a_perm(i: usize) -> usize {
    (i + 3) % 6
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HexLetter {
    pub bit: u8,
    pub trit: u8,
}

impl HexLetter {
    pub fn new(bit: u8, trit: u8) -> Result<HexLetter, Error> {
        if bit > 1 || trit > 2 {
            return Err(Error::InvalidArgument(format!("({bit},{trit}) is not a letter of {{0,1}}x{{0,1,2}}")));
        }
        Ok(HexLetter { bit, trit })
    }

    pub fn from_index(i: usize) -> HexLetter {
        assert!(i < 6);
        HexLetter {
            bit: (i / 3) as u8,
            trit: (i % 3) as u8,
        }
    }

    pub fn index(self) -> usize {
        3 * self.bit as usize + self.trit as usize
    }
}

impl fmt::Debug for HexLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.bit, self.trit)
    }
}

/// A vertex of the 6-ary tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HexVertex {
    pub path: Vec<HexLetter>,
}

impl HexVertex {
    pub fn root() -> HexVertex {
        HexVertex { path: Vec::new() }
    }

    pub fn from_indices(indices: &[usize]) -> HexVertex {
        HexVertex {
            path: indices.iter().map(|&i| HexLetter::from_index(i)).collect(),
        }
    }

    pub fn level(&self) -> usize {
        self.path.len()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.path.iter().map(|l| l.index()).collect()
    }

    /// Base-6 index, most significant letter first.
    pub fn index(&self) -> usize {
        self.path.iter().fold(0, |acc, l| acc * 6 + l.index())
    }

    pub fn from_index(mut index: usize, level: usize) -> HexVertex {
        let mut digits = vec![0usize; level];
        for k in (0..level).rev() {
            digits[k] = index % 6;
            index /= 6;
        }
        HexVertex::from_indices(&digits)
    }

    pub fn all_at_level(level: usize) -> impl Iterator<Item = HexVertex> {
        (0..6usize.pow(level as u32)).map(move |i| HexVertex::from_index(i, level))
    }

    /// The vertex `(u, ω^u)` of `T_ω`.
    pub fn lift(v: &BinVertex, omega: &OmegaSeq) -> HexVertex {
        HexVertex {
            path: v
                .path
                .iter()
                .enumerate()
                .map(|(k, &b)| HexLetter { bit: b, trit: omega.at(k) })
                .collect(),
        }
    }

    /// First coordinates: the projection `φ_ω`.
    pub fn project(&self) -> BinVertex {
        BinVertex {
            path: self.path.iter().map(|l| l.bit).collect(),
        }
    }

    pub fn is_prefix_of(&self, other: &HexVertex) -> bool {
        other.path.starts_with(&self.path)
    }

    /// `"bt.bt.…"`, e.g. `"00.12"`; the root is `"e"`.
    pub fn to_text(&self) -> String {
        if self.path.is_empty() {
            return "e".into();
        }
        self.path
            .iter()
            .map(|l| format!("{}{}", l.bit, l.trit))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse(text: &str) -> Result<HexVertex, Error> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(HexVertex::root());
        }
        let err = |reason: &str| Error::Parse {
            token: text.to_string(),
            reason: reason.to_string(),
        };
        text.split('.')
            .map(|part| {
                let b: Vec<u32> = part.chars().filter_map(|c| c.to_digit(10)).collect();
                if part.len() != 2 || b.len() != 2 {
                    return Err(err("each letter is two digits <bit><trit>"));
                }
                HexLetter::new(b[0] as u8, b[1] as u8).map_err(|_| err("letter out of range"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|path| HexVertex { path })
    }
}

impl fmt::Debug for HexVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HexVertex({})", self.to_text())
    }
}

/// Root permutation and the six first-level sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionDecomp6 {
    /// `perm[i]` is the image of letter `i`.
    pub perm: [u8; 6],
    pub sections: [Word; 6],
}

impl SectionDecomp6 {
    pub fn swaps(&self) -> bool {
        self.perm[0] != 0
    }
}

pub(crate) fn decompose_raw_u(w: &Word) -> (bool, [Word; 6]) {
    let mut swaps = false;
    let mut s: [WordBuilder; 6] = Default::default();
    for &y in w.letters() {
        if y.is_a() {
            swaps = !swaps;
            let (lo, hi) = s.split_at_mut(3);
            for i in 0..3 {
                std::mem::swap(&mut lo[i], &mut hi[i]);
            }
        } else {
            for (trit, b) in s[..3].iter_mut().enumerate() {
                if selector_is_a(y, trit as u8) {
                    b.push(Letter::A);
                }
            }
            for b in &mut s[3..] {
                b.push(y);
            }
        }
    }
    (swaps, s.map(WordBuilder::finish))
}

pub fn decompose_u(w: &Word) -> SectionDecomp6 {
    let (swaps, sections) = decompose_raw_u(w);
    let mut perm = [0u8; 6];
    for (i, p) in perm.iter_mut().enumerate() {
        *p = if swaps { a_perm(i) } else { i } as u8;
    }
    SectionDecomp6 { perm, sections }
}

pub fn act_u(w: &Word, v: &HexVertex) -> HexVertex {
    let mut path = v.indices();
    act_u_in_place(w, &mut path);
    HexVertex::from_indices(&path)
}

pub(crate) fn act_u_in_place(w: &Word, path: &mut [usize]) {
    let mut g = w.clone();
    for x in path.iter_mut() {
        if g.is_empty() {
            break;
        }
        let (swaps, mut sections) = decompose_raw_u(&g);
        let orig = *x;
        if swaps {
            *x = a_perm(orig);
        }
        g = std::mem::take(&mut sections[orig]);
    }
}

pub fn is_trivial_u(w: &Word) -> bool {
    UniversalGroup::new().is_trivial(w)
}

pub fn equal_u(u: &Word, v: &Word) -> bool {
    UniversalGroup::new().equal(u, v)
}

/// `ψ_ω(w)` evaluated at `v`: act on `(v, ω^v) ∈ T_ω`, then project.
pub fn act_restricted(w: &Word, omega: &OmegaSeq, v: &BinVertex) -> BinVertex {
    act_u(w, &HexVertex::lift(v, omega)).project()
}

/// Whether `ψ_ω` sends the generator of `U` to the same-named generator of
/// `G_ω` on every vertex of levels `1..=depth`.
pub fn psi_agrees(generator: Letter, omega: &OmegaSeq, depth: usize) -> bool {
    let w = Word::letter(generator);
    (1..=depth).all(|level| {
        BinVertex::all_at_level(level).all(|v| act_restricted(&w, omega, &v) == act_g(&w, omega, &v))
    })
}

/// Exact word problem in `U` with a shared memo table.
#[derive(Default)]
pub struct UniversalGroup {
    memo: DashMap<Word, bool>,
}

impl UniversalGroup {
    pub fn new() -> UniversalGroup {
        UniversalGroup { memo: DashMap::new() }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        match w.len() {
            0 => true,
            1 => false,
            _ => {
                if let Some(v) = self.memo.get(w) {
                    return *v;
                }
                let (swaps, sections) = decompose_raw_u(w);
                let result = !swaps && sections.iter().all(|s| self.is_trivial(s));
                self.memo.insert(w.clone(), result);
                result
            }
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    pub fn decompose(&self, w: &Word) -> SectionDecomp6 {
        decompose_u(w)
    }

    pub fn act(&self, w: &Word, v: &HexVertex) -> HexVertex {
        act_u(w, v)
    }

    /// The permutation induced on level `level` of the 6-ary tree, indexed by
    /// `HexVertex::index`.
    pub fn level_action(&self, w: &Word, level: usize) -> Vec<u32> {
        let mut cache = HashMap::new();
        level_action_rec(w, level, &mut cache)
    }
}

fn level_action_rec(w: &Word, level: usize, cache: &mut HashMap<(Word, usize), Vec<u32>>) -> Vec<u32> {
    let size = 6usize.pow(level as u32);
    if w.is_empty() || level == 0 {
        return (0..size as u32).collect();
    }
    if let Some(p) = cache.get(&(w.clone(), level)) {
        return p.clone();
    }
    let (swaps, sections) = decompose_raw_u(w);
    let block = size / 6;
    let mut out = vec![0u32; size];
    for (x, s) in sections.iter().enumerate() {
        let sub = level_action_rec(s, level - 1, cache);
        let target = if swaps { a_perm(x) } else { x } * block;
        for (j, &img) in sub.iter().enumerate() {
            out[x * block + j] = (target + img as usize) as u32;
        }
    }
    cache.insert((w.clone(), level), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gomega::{decompose_g, GrigorchukGroup};
    use crate::omega::lambda_family;
    use crate::words::reduced_words_up_to;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn words(s: &[&str]) -> [Word; 6] {
        std::array::from_fn(|i| w(s[i]))
    }

    /// Generator-by-generator evaluation on a 6-ary path, rightmost letter first.
    fn oracle_act_u(word: &Word, v: &[usize]) -> Vec<usize> {
        let mut path = v.to_vec();
        for &l in word.letters().iter().rev() {
            if path.is_empty() {
                break;
            }
            if l.is_a() {
                path[0] = a_perm(path[0]);
                continue;
            }
            // Walk down letters with bit 1; at the first letter (0, t) apply the
            // selector for t to the next letter.
            if let Some(k) = path.iter().position(|&x| x < 3) {
                if selector_is_a(l, path[k] as u8) && k + 1 < path.len() {
                    path[k + 1] = a_perm(path[k + 1]);
                }
            }
        }
        path
    }

    #[test]
    fn generator_table() {
        let id = [0, 1, 2, 3, 4, 5];
        let d = decompose_u(&w("b"));
        assert_eq!(d.perm, id);
        assert_eq!(d.sections, words(&["a", "a", "e", "b", "b", "b"]));
        let d = decompose_u(&w("c"));
        assert_eq!(d.sections, words(&["a", "e", "a", "c", "c", "c"]));
        let d = decompose_u(&w("d"));
        assert_eq!(d.sections, words(&["e", "a", "a", "d", "d", "d"]));
        let d = decompose_u(&w("a"));
        assert_eq!(d.perm, [3, 4, 5, 0, 1, 2]);
        assert!(d.sections.iter().all(Word::is_empty));
        let d = decompose_u(&w("aba"));
        assert_eq!(d.perm, id);
        assert_eq!(d.sections, words(&["b", "b", "b", "a", "a", "e"]));
    }

    #[test]
    fn act_examples() {
        let v = HexVertex { path: vec![HexLetter::new(0, 1).unwrap()] };
        assert_eq!(act_u(&w("a"), &v).to_text(), "11");
        let v = HexVertex::parse("10.00.01").unwrap();
        assert_eq!(act_u(&Word::empty(), &v), v);
        // b has identity root permutation and section b at (1,0), which again
        // fixes (0,0); only the level below (0,0) is moved, by the section a.
        let v = HexVertex::parse("10.00").unwrap();
        assert_eq!(act_u(&w("b"), &v).to_text(), "10.00");
        let v = HexVertex::parse("10.00.00").unwrap();
        assert_eq!(act_u(&w("b"), &v).to_text(), "10.00.10");
        // Two-step evaluation through the decomposition.
        let d = decompose_u(&w("b"));
        let below = act_u(&d.sections[3], &HexVertex::parse("00.00").unwrap());
        assert_eq!(below.to_text(), "00.10");
    }

    #[test]
    fn relations_and_nontrivial_words() {
        let u = UniversalGroup::new();
        for r in ["aa", "bb", "cc", "dd", "bcd", "dcb"] {
            assert!(u.is_trivial(&Word::reduce(r.chars().map(|c| Letter::from_char(c).unwrap()))));
        }
        for g in ["a", "b", "c", "d", "ab", "abab"] {
            assert!(!u.is_trivial(&w(g)), "{g}");
        }
        // abab moves something on level 3.
        let abab = w("abab");
        assert!(HexVertex::all_at_level(3).any(|v| act_u(&abab, &v) != v));
    }

    #[test]
    fn act_restricted_examples() {
        let omega = OmegaSeq::parse("0|12").unwrap();
        let v0 = BinVertex::parse("0").unwrap();
        assert_eq!(act_restricted(&w("a"), &omega, &v0).to_text(), "1");
        let v = BinVertex::parse("0110").unwrap();
        assert_eq!(act_restricted(&Word::empty(), &omega, &v), v);
        let omega2 = OmegaSeq::parse("2|01").unwrap();
        let v = BinVertex::parse("01").unwrap();
        assert_eq!(act_restricted(&w("b"), &omega2, &v).to_text(), "01");
    }

    #[test]
    fn psi_examples() {
        assert!(psi_agrees(Letter::A, &OmegaSeq::parse("|012").unwrap(), 8));
        assert!(psi_agrees(Letter::B, &OmegaSeq::parse("0|12").unwrap(), 8));
        assert!(psi_agrees(Letter::D, &OmegaSeq::parse("|0").unwrap(), 8));
    }

    #[test]
    fn level_action_matches_pointwise() {
        let u = UniversalGroup::new();
        for word in reduced_words_up_to(4) {
            let perm = u.level_action(&word, 3);
            for v in HexVertex::all_at_level(3) {
                assert_eq!(perm[v.index()] as usize, act_u(&word, &v).index());
                assert_eq!(act_u(&word, &v).indices(), oracle_act_u(&word, &v.indices()));
            }
        }
    }

    #[test]
    fn decider_agrees_with_depth_capped_action() {
        let u = UniversalGroup::new();
        for word in reduced_words_up_to(6) {
            let moves = HexVertex::all_at_level(5).any(|v| oracle_act_u(&word, &v.indices()) != v.indices());
            assert_eq!(u.is_trivial(&word), !moves, "{word}");
        }
    }

    /// 30 parameter sequences drawn from Λ families.
    fn probe_set() -> Vec<OmegaSeq> {
        let mut out = Vec::new();
        for r in [&[1u32][..], &[1, 1], &[2, 1], &[1, 2]] {
            out.extend(lambda_family(r).unwrap().members);
        }
        out.sort();
        out.dedup();
        assert_eq!(out.len(), 30);
        out
    }

    #[test]
    fn faithfulness_cross_check() {
        let u = UniversalGroup::new();
        let groups: Vec<_> = probe_set().into_iter().map(GrigorchukGroup::new).collect();
        for word in reduced_words_up_to(6) {
            let in_u = u.is_trivial(&word);
            let in_all = groups.iter().all(|g| g.is_trivial(&word));
            assert_eq!(in_u, in_all, "{word}");
        }
    }

    fn word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..4).prop_map(Letter::from_index), 0..24).prop_map(Word::reduce)
    }

    fn omega() -> impl Strategy<Value = OmegaSeq> {
        (
            prop::collection::vec(0u8..3, 0..4),
            prop::collection::vec(0u8..3, 1..4),
        )
            .prop_map(|(a, b)| OmegaSeq::new(a, b).unwrap())
    }

    proptest! {
        #[test]
        fn decomposition_is_a_homomorphism(u in word(), v in word()) {
            let du = decompose_u(&u);
            let dv = decompose_u(&v);
            let duv = decompose_u(&u.concat(&v));
            for x in 0..6 {
                prop_assert_eq!(duv.perm[x], du.perm[dv.perm[x] as usize]);
                let expected = du.sections[dv.perm[x] as usize].concat(&dv.sections[x]);
                prop_assert_eq!(&duv.sections[x], &expected);
            }
            prop_assert!(duv.perm == [0, 1, 2, 3, 4, 5] || duv.perm == [3, 4, 5, 0, 1, 2]);
        }

        #[test]
        fn reconstruction_matches_direct_evaluation(u in word(),
                                                    path in prop::collection::vec(0usize..6, 1..6)) {
            let d = decompose_u(&u);
            let x = path[0];
            let mut expected = vec![d.perm[x] as usize];
            expected.extend(act_u(&d.sections[x], &HexVertex::from_indices(&path[1..])).indices());
            prop_assert_eq!(act_u(&u, &HexVertex::from_indices(&path)).indices(), expected);
        }

        #[test]
        fn psi_is_a_homomorphism_onto_g_omega(u in word(), om in omega(),
                                              path in prop::collection::vec(0u8..2, 0..9)) {
            let v = BinVertex { path };
            prop_assert_eq!(act_restricted(&u, &om, &v), act_g(&u, &om, &v));
        }

        /// Commuting square: below vertex 0, ψ_ω(w) acts as the section of w at
        /// (0, ω₁) viewed in G_{τω}, and also as the G_ω section in context τω.
        #[test]
        fn commuting_diagram(u in word(), om in omega(),
                             path in prop::collection::vec(0u8..2, 0..6)) {
            let w = if u.a_count() % 2 == 0 { u } else { u.concat(&Word::letter(Letter::A)) };
            let mut full = vec![0u8];
            full.extend(&path);
            let lhs = act_restricted(&w, &om, &BinVertex { path: full });
            prop_assert_eq!(lhs.path[0], 0);
            let below = BinVertex { path: path.clone() };
            let sec_u = &decompose_u(&w).sections[om.first() as usize];
            let via_u = act_restricted(sec_u, &om.shift(), &below);
            let dg = decompose_g(&w, &om);
            let via_g = act_g(&dg.sec0, &dg.context, &below);
            prop_assert_eq!(&lhs.path[1..], &via_u.path[..]);
            prop_assert_eq!(&lhs.path[1..], &via_g.path[..]);
        }
    }
}
