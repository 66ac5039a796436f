//! Reduced words over the involutive alphabet `{a, b, c, d}`.
//!
//! Every group handled by this crate satisfies `a² = b² = c² = d² = bcd = 1`,
//! so `b, c, d` together with the identity form a Klein four-group. A word is
//! kept in the normal form of the rewriting system
//! `aa → ε`, `xx → ε`, `xy → z` for `{x, y, z} = {b, c, d}`, which makes every
//! reduced word alternate between `a` and a letter of `{b, c, d}`.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// One of the four generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    B = 1,
    C = 2,
    D = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::C, Letter::D];
    /// The letters acting trivially on the first level.
    pub const KLEIN: [Letter; 3] = [Letter::B, Letter::C, Letter::D];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Letter {
        Letter::ALL[i]
    }

    #[inline]
    pub fn is_a(self) -> bool {
        self == Letter::A
    }

    pub fn to_char(self) -> char {
        (b'a' + self as u8) as char
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'c' => Some(Letter::C),
            'd' => Some(Letter::D),
            _ => None,
        }
    }

    /// Product of two letters of `{b, c, d}`; `None` stands for the identity.
    #[inline]
    fn klein_product(self, other: Letter) -> Option<Letter> {
        debug_assert!(!self.is_a() && !other.is_a());
        // b=1, c=2, d=3 and the Klein table is xor on these codes.
        match (self as u8) ^ (other as u8) {
            0 => None,
            x => Some(Letter::from_index(x as usize)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A word in normal form.
///
/// Equality is syntactic. Whether two words denote the same group element
/// depends on the group and is decided elsewhere.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn letter(l: Letter) -> Word {
        Word { letters: vec![l] }
    }

    /// Reduces an arbitrary letter sequence to normal form.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
        let mut w = WordBuilder::new();
        for l in raw {
            w.push(l);
        }
        w.finish()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Every generator is an involution, so the inverse is the reversal.
    pub fn inverse(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = WordBuilder::from_word(self.clone());
        w.extend(other.letters.iter().copied());
        w.finish()
    }

    /// `self` multiplied by itself `n` times.
    pub fn pow(&self, mut n: u64) -> Word {
        let mut base = self.clone();
        let mut acc = Word::empty();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.concat(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.concat(&base);
            }
        }
        acc
    }

    /// Commutator `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.inverse().concat(&y.inverse()).concat(x).concat(y)
    }

    /// Number of `a` letters; its parity is the root swap on the binary tree.
    pub fn a_count(&self) -> usize {
        self.letters.iter().filter(|l| l.is_a()).count()
    }

    /// Shortlex order: shorter words first, then lexicographic with `a < b < c < d`.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }

    /// Text form used at the command line: `e` for the empty word.
    pub fn to_text(&self) -> String {
        if self.is_empty() {
            "e".to_string()
        } else {
            self.letters.iter().map(|l| l.to_char()).collect()
        }
    }

    pub fn parse(text: &str) -> Result<Word, Error> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(Word::empty());
        }
        let mut raw = Vec::with_capacity(text.len());
        for (i, ch) in text.chars().enumerate() {
            match Letter::from_char(ch) {
                Some(l) => raw.push(l),
                None => {
                    return Err(Error::Parse {
                        token: text.to_string(),
                        reason: format!("invalid letter {ch:?} at position {i}"),
                    })
                }
            }
        }
        Ok(Word::reduce(raw))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.shortlex_cmp(other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.to_text())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

/// Incremental reducer: a stack that is kept in normal form after every push.
#[derive(Clone, Default, Debug)]
pub struct WordBuilder {
    stack: Vec<Letter>,
}

impl WordBuilder {
    pub fn new() -> Self {
        WordBuilder { stack: Vec::new() }
    }

    pub fn from_word(w: Word) -> Self {
        WordBuilder { stack: w.letters }
    }

    #[inline]
    pub fn push(&mut self, l: Letter) {
        match self.stack.last().copied() {
            None => self.stack.push(l),
            Some(top) if top.is_a() && l.is_a() => {
                self.stack.pop();
            }
            Some(top) if !top.is_a() && !l.is_a() => {
                self.stack.pop();
                // The new top (if any) is `a`, so the merged letter cannot interact further.
                if let Some(m) = top.klein_product(l) {
                    self.stack.push(m);
                }
            }
            Some(_) => self.stack.push(l),
        }
    }

    pub fn extend<I: IntoIterator<Item = Letter>>(&mut self, it: I) {
        for l in it {
            self.push(l);
        }
    }

    pub fn push_word(&mut self, w: &Word) {
        self.extend(w.letters.iter().copied());
    }

    pub fn finish(self) -> Word {
        Word { letters: self.stack }
    }
}

/// All reduced words of exactly length `n`, in shortlex order.
pub fn reduced_words_of_length(n: usize) -> Vec<Word> {
    if n == 0 {
        return vec![Word::empty()];
    }
    let mut layer: Vec<Vec<Letter>> = Letter::ALL.iter().map(|&l| vec![l]).collect();
    for _ in 1..n {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for w in &layer {
            let last = *w.last().unwrap();
            for &l in &Letter::ALL {
                if l.is_a() != last.is_a() {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    layer.into_iter().map(|letters| Word { letters }).collect()
}

/// All reduced words of length at most `max_len`, in shortlex order (ε first).
pub fn reduced_words_up_to(max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(reduced_words_of_length).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn raw(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::from_char(c).unwrap()).collect()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Word::reduce(raw("aa")), Word::empty());
        assert_eq!(Word::reduce(raw("bc")), w("d"));
        assert_eq!(Word::reduce(raw("")), Word::empty());
        assert_eq!(Word::reduce(raw("abba")), Word::empty());
        assert_eq!(Word::reduce(raw("bcd")), Word::empty());
        assert_eq!(Word::reduce(raw("abcda")), Word::empty());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Word::empty().inverse(), Word::empty());
        assert_eq!(w("ab").inverse(), w("ba"));
        assert_eq!(w("acab").inverse(), w("baca"));
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w("a").concat(&w("a")), Word::empty());
        assert_eq!(w("b").concat(&w("c")), w("d"));
        assert_eq!(w("ab").concat(&w("ba")), Word::empty());
    }

    #[test]
    fn text_roundtrip_and_errors() {
        assert_eq!(w("e"), Word::empty());
        assert_eq!(w("abac").to_text(), "abac");
        assert_eq!(Word::empty().to_text(), "e");
        let err = Word::parse("abx").unwrap_err();
        assert!(err.to_string().contains("abx"));
    }

    #[test]
    fn pow_matches_repeated_concat() {
        let x = w("abcad");
        let mut acc = Word::empty();
        for n in 0..9 {
            assert_eq!(x.pow(n), acc);
            acc = acc.concat(&x);
        }
    }

    #[test]
    fn enumeration_counts() {
        // 4 words of length 1, then 6 = 1*3 + 3*1, then alternately x3.
        let counts: Vec<usize> = (0..6).map(|n| reduced_words_of_length(n).len()).collect();
        assert_eq!(counts, vec![1, 4, 6, 12, 18, 36]);
        let all = reduced_words_up_to(5);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
        assert!(all.iter().all(|x| Word::reduce(x.letters().to_vec()) == *x));
    }

    fn letters() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0usize..4).prop_map(Letter::from_index), 0..40)
    }

    proptest! {
        #[test]
        fn confluence_left_right(s in letters()) {
            let left = Word::reduce(s.clone());
            // Reduce from the right: reduce the reversal and reverse back.
            let mut rev = s.clone();
            rev.reverse();
            let right = Word::reduce(rev).inverse();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn alternation_and_length(s in letters()) {
            let r = Word::reduce(s.clone());
            prop_assert!(r.len() <= s.len());
            for p in r.letters().windows(2) {
                prop_assert!(p[0].is_a() != p[1].is_a());
            }
            prop_assert_eq!(Word::reduce(r.letters().to_vec()), r);
        }

        #[test]
        fn monoid_laws(a in letters(), b in letters(), c in letters()) {
            let (u, v, x) = (Word::reduce(a), Word::reduce(b), Word::reduce(c));
            prop_assert_eq!(u.concat(&v).concat(&x), u.concat(&v.concat(&x)));
            prop_assert_eq!(u.concat(&Word::empty()), u.clone());
            prop_assert_eq!(Word::empty().concat(&u), u.clone());
            prop_assert_eq!(u.concat(&u.inverse()), Word::empty());
        }
    }
}
