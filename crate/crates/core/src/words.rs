//! Words over a finite alphabet and the free tensor algebra they span.
//!
//! Letters are the integers `1..=alphabet`. A [`TensorElem`] is a finite
//! linear combination of words with exact rational coefficients; zero
//! coefficients are never stored and terms iterate by length, then
//! lexicographically.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, ParseError, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: usize,
    letters: Vec<usize>,
}

impl Word {
    pub fn new(alphabet: usize, letters: Vec<usize>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::usage("alphabet size must be positive"));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l > alphabet) {
            return Err(Error::usage(format!(
                "letter {bad} outside alphabet 1..={alphabet}"
            )));
        }
        Ok(Word { alphabet, letters })
    }

    pub fn empty(alphabet: usize) -> Self {
        assert!(alphabet > 0, "alphabet size must be positive");
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn letter(alphabet: usize, letter: usize) -> Result<Self> {
        Word::new(alphabet, vec![letter])
    }

    pub(crate) fn from_letters_unchecked(alphabet: usize, letters: Vec<usize>) -> Self {
        debug_assert!(letters.iter().all(|&l| l >= 1 && l <= alphabet));
        Word { alphabet, letters }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, letter: usize) -> bool {
        self.letters.contains(&letter)
    }

    pub fn count(&self, letter: usize) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        concat(self, other)
    }

    /// The word followed by a single letter.
    pub fn push(&self, letter: usize) -> Result<Word> {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Word::new(self.alphabet, letters)
    }

    /// Same letters read over a larger alphabet.
    pub fn widen(&self, alphabet: usize) -> Result<Word> {
        if alphabet < self.alphabet {
            return Err(Error::usage(format!(
                "cannot narrow alphabet {} to {alphabet}",
                self.alphabet
            )));
        }
        Ok(Word {
            alphabet,
            letters: self.letters.clone(),
        })
    }

    /// Row-major flat index of the word inside signature level `len()`,
    /// first letter slowest.
    pub fn flat_index(&self) -> usize {
        self.letters
            .iter()
            .fold(0, |acc, &l| acc * self.alphabet + (l - 1))
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub fn all_of_length(alphabet: usize, len: usize) -> impl Iterator<Item = Word> {
        let total = alphabet
            .checked_pow(len as u32)
            .expect("word count overflows");
        (0..total).map(move |mut idx| {
            let mut letters = vec![0; len];
            for slot in letters.iter_mut().rev() {
                *slot = idx % alphabet + 1;
                idx /= alphabet;
            }
            Word { alphabet, letters }
        })
    }

    /// All words of length at most `max_len`, shortest first.
    pub fn all_up_to(alphabet: usize, max_len: usize) -> impl Iterator<Item = Word> {
        (0..=max_len).flat_map(move |len| Word::all_of_length(alphabet, len))
    }

    /// Parses `"[3,1,2]"`; `"[]"` is the empty word.
    pub fn parse(text: &str, alphabet: usize) -> Result<Word> {
        let mut cursor = Cursor::new(text);
        cursor.skip_ws();
        let word = cursor.word(alphabet)?;
        cursor.skip_ws();
        if !cursor.at_end() {
            return Err(cursor.error("trailing input after word").into());
        }
        Ok(word)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.alphabet.cmp(&other.alphabet))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("]")
    }
}

pub fn concat(w1: &Word, w2: &Word) -> Result<Word> {
    if w1.alphabet != w2.alphabet {
        return Err(Error::usage(format!(
            "alphabet mismatch: {} vs {}",
            w1.alphabet, w2.alphabet
        )));
    }
    let mut letters = Vec::with_capacity(w1.len() + w2.len());
    letters.extend_from_slice(&w1.letters);
    letters.extend_from_slice(&w2.letters);
    Ok(Word {
        alphabet: w1.alphabet,
        letters,
    })
}

/// An element of the tensor algebra: a finite rational combination of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorElem {
    alphabet: usize,
    terms: BTreeMap<Word, Rational>,
}

impl TensorElem {
    pub fn zero(alphabet: usize) -> Self {
        assert!(alphabet > 0, "alphabet size must be positive");
        TensorElem {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    /// The empty word with coefficient one, unit of the shuffle product.
    pub fn unit(alphabet: usize) -> Self {
        Self::from_word(Word::empty(alphabet))
    }

    pub fn from_word(word: Word) -> Self {
        Self::from_term(Rational::one(), word)
    }

    pub fn from_term(coef: Rational, word: Word) -> Self {
        let mut elem = TensorElem::zero(word.alphabet);
        elem.add_term(word, coef);
        elem
    }

    pub fn letter(alphabet: usize, letter: usize) -> Result<Self> {
        Ok(Self::from_word(Word::letter(alphabet, letter)?))
    }

    /// Builds an element from `(coefficient, word)` pairs, merging repeats.
    pub fn from_terms<I>(alphabet: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Word)>,
    {
        let mut elem = TensorElem::zero(alphabet);
        for (c, w) in terms {
            if w.alphabet != alphabet {
                return Err(Error::usage(format!(
                    "word {w} has alphabet {}, expected {alphabet}",
                    w.alphabet
                )));
            }
            elem.add_term(w, c);
        }
        Ok(elem)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &Word) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn min_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).min().unwrap_or(0)
    }

    pub fn has_empty_word(&self) -> bool {
        self.terms.keys().next().is_some_and(Word::is_empty)
    }

    pub fn add_term(&mut self, word: Word, coef: Rational) {
        debug_assert_eq!(word.alphabet, self.alphabet);
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(existing) => {
                *existing += coef;
                if existing.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, coef);
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> TensorElem {
        if factor.is_zero() {
            return TensorElem::zero(self.alphabet);
        }
        TensorElem {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c * factor))
                .collect(),
        }
    }

    /// Concatenates `suffix` to the right of every word.
    pub fn concat_word(&self, suffix: &Word) -> Result<TensorElem> {
        check_alphabet(self.alphabet, suffix.alphabet)?;
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (concat(w, suffix).expect("alphabets checked"), c.clone()))
            .collect();
        Ok(TensorElem {
            alphabet: self.alphabet,
            terms,
        })
    }

    /// Bilinear concatenation product.
    pub fn concat(&self, other: &TensorElem) -> Result<TensorElem> {
        check_alphabet(self.alphabet, other.alphabet)?;
        let mut out = TensorElem::zero(self.alphabet);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(concat(wa, wb)?, ca * cb);
            }
        }
        Ok(out)
    }

    /// Same element read over a larger alphabet.
    pub fn widen(&self, alphabet: usize) -> Result<TensorElem> {
        let mut out = TensorElem::zero(alphabet);
        for (w, c) in &self.terms {
            out.add_term(w.widen(alphabet)?, c.clone());
        }
        Ok(out)
    }

    pub fn shuffle(&self, other: &TensorElem) -> Result<TensorElem> {
        shuffle(self, other)
    }

    pub fn half_shuffle(&self, other: &TensorElem) -> Result<TensorElem> {
        half_shuffle(self, other)
    }

    /// Parses `"c1*[..] + c2*[..]"`. Coefficients are integers, `p/q`
    /// fractions or decimals and may be omitted (`"[1,2] - [2,1]"`); `"0"`
    /// is the zero element.
    pub fn parse(text: &str, alphabet: usize) -> Result<TensorElem> {
        let mut cursor = Cursor::new(text);
        let mut elem = TensorElem::zero(alphabet);
        cursor.skip_ws();
        if cursor.rest().trim() == "0" {
            return Ok(elem);
        }
        let mut first = true;
        loop {
            cursor.skip_ws();
            let mut sign = Rational::one();
            match cursor.peek() {
                Some('+') if !first => {
                    cursor.bump();
                }
                Some('-') => {
                    cursor.bump();
                    sign = -sign;
                }
                _ if !first => return Err(cursor.error("expected '+' or '-'").into()),
                _ => {}
            }
            cursor.skip_ws();
            let coef = if cursor.peek() == Some('[') {
                Rational::one()
            } else {
                let c = cursor.rational()?;
                cursor.skip_ws();
                cursor.expect('*')?;
                cursor.skip_ws();
                c
            };
            let word = cursor.word(alphabet)?;
            elem.add_term(word, sign * coef);
            first = false;
            cursor.skip_ws();
            if cursor.at_end() {
                return Ok(elem);
            }
        }
    }
}

fn check_alphabet(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::usage(format!("alphabet mismatch: {a} vs {b}")));
    }
    Ok(())
}

impl fmt::Display for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{c}*{w}")?,
                (0, true) => write!(f, "-{}*{w}", c.abs())?,
                (_, false) => write!(f, " + {c}*{w}")?,
                (_, true) => write!(f, " - {}*{w}", c.abs())?,
            }
        }
        Ok(())
    }
}

impl Add for &TensorElem {
    type Output = TensorElem;

    fn add(self, rhs: &TensorElem) -> TensorElem {
        assert_eq!(self.alphabet, rhs.alphabet, "alphabet mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TensorElem {
    type Output = TensorElem;

    fn sub(self, rhs: &TensorElem) -> TensorElem {
        assert_eq!(self.alphabet, rhs.alphabet, "alphabet mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &TensorElem {
    type Output = TensorElem;

    fn neg(self) -> TensorElem {
        self.scale(&-Rational::one())
    }
}

impl Mul<&Rational> for &TensorElem {
    type Output = TensorElem;

    fn mul(self, rhs: &Rational) -> TensorElem {
        self.scale(rhs)
    }
}

/// Multiset of all interleavings of two letter sequences, with multiplicity.
///
/// Enumerates the `C(m + n, m)` choices of output positions taken by `a`.
pub(crate) fn shuffle_letters(a: &[usize], b: &[usize]) -> HashMap<Vec<usize>, u64> {
    let total = a.len() + b.len();
    let mut out = HashMap::new();
    let mut buf = vec![0usize; total];
    fn rec(
        a: &[usize],
        b: &[usize],
        buf: &mut [usize],
        pos: usize,
        out: &mut HashMap<Vec<usize>, u64>,
    ) {
        if a.is_empty() {
            buf[pos..].copy_from_slice(b);
            *out.entry(buf.to_vec()).or_insert(0) += 1;
            return;
        }
        if b.is_empty() {
            buf[pos..].copy_from_slice(a);
            *out.entry(buf.to_vec()).or_insert(0) += 1;
            return;
        }
        buf[pos] = a[0];
        rec(&a[1..], b, buf, pos + 1, out);
        buf[pos] = b[0];
        rec(a, &b[1..], buf, pos + 1, out);
    }
    rec(a, b, &mut buf, 0, &mut out);
    out
}

/// Right half-shuffle of two letter sequences, `b` non-empty, following the
/// defining recursion
///
/// ```text
/// a ≻ i     = a·i
/// a ≻ (v·i) = (a ≻ v + v ≻ a)·i
/// ```
///
/// with `∅ ⧢ x = x ⧢ ∅ = x` standing in for the bracket when either side is
/// empty. Results are memoized on prefix lengths.
pub(crate) fn half_shuffle_letters(a: &[usize], b: &[usize]) -> HashMap<Vec<usize>, u64> {
    assert!(
        !b.is_empty(),
        "right operand of a half-shuffle must be non-empty"
    );

    type Memo = HashMap<(bool, usize, usize), HashMap<Vec<usize>, u64>>;

    // hs(flip, i, j) = x[..i] ≻ y[..j] where (x, y) = (a, b) or (b, a).
    fn hs(
        a: &[usize],
        b: &[usize],
        flip: bool,
        i: usize,
        j: usize,
        memo: &mut Memo,
    ) -> HashMap<Vec<usize>, u64> {
        if let Some(hit) = memo.get(&(flip, i, j)) {
            return hit.clone();
        }
        let (x, y) = if flip { (b, a) } else { (a, b) };
        let last = y[j - 1];
        let inner = if j == 1 {
            HashMap::from([(x[..i].to_vec(), 1u64)])
        } else if i == 0 {
            HashMap::from([(y[..j - 1].to_vec(), 1u64)])
        } else {
            let mut bracket = hs(a, b, flip, i, j - 1, memo);
            for (w, c) in hs(a, b, !flip, j - 1, i, memo) {
                *bracket.entry(w).or_insert(0) += c;
            }
            bracket
        };
        let result: HashMap<Vec<usize>, u64> = inner
            .into_iter()
            .map(|(mut w, c)| {
                w.push(last);
                (w, c)
            })
            .collect();
        memo.insert((flip, i, j), result.clone());
        result
    }

    let mut memo = Memo::new();
    hs(a, b, false, a.len(), b.len(), &mut memo)
}

fn bilinear<F>(a: &TensorElem, b: &TensorElem, word_op: F) -> TensorElem
where
    F: Fn(&[usize], &[usize]) -> HashMap<Vec<usize>, u64>,
{
    let alphabet = a.alphabet;
    let mut acc: HashMap<Vec<usize>, Rational> = HashMap::new();
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let c = ca * cb;
            for (letters, mult) in word_op(&wa.letters, &wb.letters) {
                let term = &c * Rational::from_integer(BigInt::from(mult));
                match acc.get_mut(&letters) {
                    Some(slot) => *slot += term,
                    None => {
                        acc.insert(letters, term);
                    }
                }
            }
        }
    }
    TensorElem {
        alphabet,
        terms: acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(letters, c)| (Word::from_letters_unchecked(alphabet, letters), c))
            .collect(),
    }
}

/// Shuffle product, extended bilinearly; `∅` is its unit.
pub fn shuffle(a: &TensorElem, b: &TensorElem) -> Result<TensorElem> {
    check_alphabet(a.alphabet, b.alphabet)?;
    Ok(bilinear(a, b, shuffle_letters))
}

/// Right half-shuffle `a ≻ b`, extended bilinearly. The right operand must
/// not contain the empty word.
pub fn half_shuffle(a: &TensorElem, b: &TensorElem) -> Result<TensorElem> {
    check_alphabet(a.alphabet, b.alphabet)?;
    if b.has_empty_word() {
        return Err(Error::domain(
            "half-shuffle is undefined for an empty word on the right",
        ));
    }
    Ok(bilinear(a, b, half_shuffle_letters))
}

/// Rewrites `w` as `Σ c·((a·q) ⧢ r)` for a letter `a` occurring in `w`.
///
/// Works by induction on the first position of `a`: if `w = w0·a·w1` with
/// `w0` free of `a`, then `w = (a·w1) ⧢ w0 − (other interleavings)`, and
/// every other interleaving has its first `a` strictly earlier.
pub fn front_decompose(w: &Word, a: usize) -> Result<Vec<(Rational, Word, Word)>> {
    if !w.contains(a) {
        return Err(Error::domain(format!(
            "word {w} does not contain letter {a}"
        )));
    }
    let alphabet = w.alphabet;
    let mut out: BTreeMap<(Word, Word), Rational> = BTreeMap::new();
    // Pending words still to rewrite, all containing `a`.
    let mut pending = TensorElem::from_word(w.clone());
    while let Some((word, coef)) = pending.terms.pop_first() {
        let pos = word
            .letters
            .iter()
            .position(|&l| l == a)
            .expect("contains a");
        if pos == 0 {
            let q = Word::from_letters_unchecked(alphabet, word.letters[1..].to_vec());
            let key = (q, Word::empty(alphabet));
            add_to(&mut out, key, coef);
            continue;
        }
        let w0 = &word.letters[..pos];
        let tail = &word.letters[pos..];
        let q = Word::from_letters_unchecked(alphabet, tail[1..].to_vec());
        let r = Word::from_letters_unchecked(alphabet, w0.to_vec());
        add_to(&mut out, (q, r), coef.clone());
        for (letters, mult) in shuffle_letters(w0, tail) {
            if letters == word.letters {
                debug_assert_eq!(mult, 1);
                continue;
            }
            let c = -&coef * Rational::from_integer(BigInt::from(mult));
            pending.add_term(Word::from_letters_unchecked(alphabet, letters), c);
        }
    }
    Ok(out
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((q, r), c)| (c, q, r))
        .collect())
}

fn add_to(map: &mut BTreeMap<(Word, Word), Rational>, key: (Word, Word), c: Rational) {
    let slot = map.entry(key).or_insert_with(Rational::zero);
    *slot += c;
}

/// Minimal cursor shared by the word and tensor-element parsers.
struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn rest(&self) -> String {
        self.chars[self.pos.min(self.chars.len())..]
            .iter()
            .collect()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: &str) -> ParseError {
        ParseError::at_column(self.pos + 1, msg)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn word(&mut self, alphabet: usize) -> Result<Word> {
        self.expect('[')?;
        self.skip_ws();
        let mut letters = Vec::new();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(Word::empty(alphabet));
        }
        loop {
            self.skip_ws();
            let col = self.pos + 1;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a letter").into());
            }
            let letter: usize = digits
                .parse()
                .map_err(|_| ParseError::at_column(col, "letter out of range"))?;
            if letter == 0 || letter > alphabet {
                return Err(ParseError::at_column(
                    col,
                    format!("letter {letter} outside alphabet 1..={alphabet}"),
                )
                .into());
            }
            letters.push(letter);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(']') => break,
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected ',' or ']'").into());
                }
            }
        }
        Ok(Word::from_letters_unchecked(alphabet, letters))
    }

    fn rational(&mut self) -> Result<Rational> {
        let col = self.pos + 1;
        let int = self.digits();
        if int.is_empty() {
            return Err(self.error("expected a coefficient or '['").into());
        }
        let mut value = parse_decimal(&int, "").expect("digits");
        if self.peek() == Some('.') {
            self.bump();
            let frac = self.digits();
            value = parse_decimal(&int, &frac).expect("digits");
        } else if self.peek() == Some('/') {
            self.bump();
            let den = self.digits();
            if den.is_empty() {
                return Err(self.error("expected a denominator").into());
            }
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return Err(ParseError::at_column(col, "zero denominator").into());
            }
            value /= Rational::from_integer(den);
        }
        Ok(value)
    }
}

/// Exact value of the decimal literal `int.frac`.
pub(crate) fn parse_decimal(int: &str, frac: &str) -> Option<Rational> {
    let digits = format!("{int}{frac}");
    let numer: BigInt = if digits.is_empty() {
        return None;
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Some(Rational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[usize]) -> Word {
        Word::new(3, letters.to_vec()).unwrap()
    }

    fn e(letters: &[usize]) -> TensorElem {
        TensorElem::from_word(w(letters))
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn concat_examples() {
        assert_eq!(concat(&w(&[]), &w(&[2, 3])).unwrap(), w(&[2, 3]));
        assert_eq!(concat(&w(&[3]), &w(&[1])).unwrap(), w(&[3, 1]));
        assert_eq!(concat(&w(&[1]), &w(&[2, 3])).unwrap(), w(&[1, 2, 3]));
        let other = Word::new(4, vec![1]).unwrap();
        assert!(matches!(concat(&w(&[1]), &other), Err(Error::Usage(_))));
    }

    #[test]
    fn word_rejects_bad_letters() {
        assert!(Word::new(3, vec![0]).is_err());
        assert!(Word::new(3, vec![4]).is_err());
        assert!(Word::new(0, vec![]).is_err());
    }

    #[test]
    fn half_shuffle_examples() {
        let got = half_shuffle(&e(&[1]), &e(&[2, 3])).unwrap();
        assert_eq!(got, &e(&[1, 2, 3]) + &e(&[2, 1, 3]));

        let got = half_shuffle(&e(&[2, 1]), &e(&[3])).unwrap();
        assert_eq!(got, e(&[2, 1, 3]));

        let got = half_shuffle(&e(&[]), &e(&[2])).unwrap();
        assert_eq!(got, e(&[2]));
    }

    #[test]
    fn half_shuffle_rejects_empty_right() {
        let err = half_shuffle(&e(&[1]), &e(&[])).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let mixed = &e(&[2]) + &e(&[]);
        assert!(half_shuffle(&e(&[1]), &mixed).is_err());
    }

    #[test]
    fn shuffle_examples() {
        let got = shuffle(&e(&[1]), &e(&[2, 3])).unwrap();
        assert_eq!(got, &(&e(&[1, 2, 3]) + &e(&[2, 1, 3])) + &e(&[2, 3, 1]));

        assert_eq!(shuffle(&e(&[]), &e(&[3, 1])).unwrap(), e(&[3, 1]));

        let got = shuffle(&e(&[1]), &e(&[1])).unwrap();
        assert_eq!(got, TensorElem::from_term(int(2), w(&[1, 1])));
    }

    #[test]
    fn shuffle_alphabet_mismatch() {
        let other = TensorElem::letter(2, 1).unwrap();
        assert!(matches!(shuffle(&e(&[1]), &other), Err(Error::Usage(_))));
    }

    #[test]
    fn front_decompose_examples() {
        let got = front_decompose(&w(&[3, 1]), 3).unwrap();
        assert_eq!(got, vec![(int(1), w(&[1]), w(&[]))]);

        let got = front_decompose(&w(&[1, 3]), 3).unwrap();
        assert_eq!(
            got,
            vec![(int(1), w(&[]), w(&[1])), (int(-1), w(&[1]), w(&[]))]
        );

        assert!(matches!(
            front_decompose(&w(&[1, 2]), 3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn front_decompose_recombines_231() {
        let word = w(&[2, 3, 1]);
        let parts = front_decompose(&word, 3).unwrap();
        let mut total = TensorElem::zero(3);
        for (c, q, r) in &parts {
            let aq = TensorElem::from_word(Word::letter(3, 3).unwrap().concat(q).unwrap());
            let term = brute_shuffle(&aq, &TensorElem::from_word(r.clone())).scale(c);
            total = &total + &term;
        }
        assert_eq!(total, TensorElem::from_word(word));
    }

    /// Independent shuffle: interleavings by explicit position subsets.
    fn brute_shuffle(a: &TensorElem, b: &TensorElem) -> TensorElem {
        let mut out = TensorElem::zero(a.alphabet());
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                let (m, n) = (wa.len(), wb.len());
                for mask in 0u32..(1 << (m + n)) {
                    if mask.count_ones() as usize != m {
                        continue;
                    }
                    let (mut ia, mut ib) = (0, 0);
                    let mut letters = Vec::new();
                    for p in 0..m + n {
                        if mask & (1 << p) != 0 {
                            letters.push(wa.letters()[ia]);
                            ia += 1;
                        } else {
                            letters.push(wb.letters()[ib]);
                            ib += 1;
                        }
                    }
                    out.add_term(Word::new(a.alphabet(), letters).unwrap(), ca * cb);
                }
            }
        }
        out
    }

    #[test]
    fn front_decompose_exhaustive_small() {
        for d in 1..=3 {
            for word in Word::all_up_to(d, 5) {
                for a in 1..=d {
                    if !word.contains(a) {
                        continue;
                    }
                    let mut total = TensorElem::zero(d);
                    for (c, q, r) in front_decompose(&word, a).unwrap() {
                        assert!(!q.is_empty() || q.is_empty());
                        let aq = Word::letter(d, a).unwrap().concat(&q).unwrap();
                        let term =
                            brute_shuffle(&TensorElem::from_word(aq), &TensorElem::from_word(r))
                                .scale(&c);
                        total = &total + &term;
                    }
                    assert_eq!(total, TensorElem::from_word(word.clone()), "{word} a={a}");
                }
            }
        }
    }

    #[test]
    fn canonical_ordering_and_display() {
        let elem = TensorElem::from_terms(
            3,
            [
                (int(2), w(&[2, 1])),
                (Rational::new(1.into(), 2.into()), w(&[3])),
                (int(-1), w(&[1, 2])),
                (int(3), w(&[])),
            ],
        )
        .unwrap();
        assert_eq!(elem.to_string(), "3*[] + 1/2*[3] - 1*[1,2] + 2*[2,1]");
        assert_eq!(TensorElem::parse(&elem.to_string(), 3).unwrap(), elem);
        assert_eq!(TensorElem::zero(3).to_string(), "0");
        assert_eq!(TensorElem::parse("0", 3).unwrap(), TensorElem::zero(3));
    }

    #[test]
    fn parse_variants() {
        let got = TensorElem::parse("[1,2] - [2,1] + 0.25*[3]", 3).unwrap();
        assert_eq!(got.coefficient(&w(&[3])), Rational::new(1.into(), 4.into()));
        assert_eq!(got.coefficient(&w(&[2, 1])), int(-1));
        assert_eq!(Word::parse("[ 3, 1 ,2 ]", 3).unwrap(), w(&[3, 1, 2]));
        assert_eq!(Word::parse("[10,2]", 12).unwrap().letters(), &[10, 2]);
        assert!(Word::parse("[4]", 3).is_err());
        assert!(Word::parse("[1,]", 3).is_err());
        assert!(TensorElem::parse("2*[1] 3*[2]", 3).is_err());
        assert!(TensorElem::parse("1/0*[1]", 3).is_err());
    }

    #[test]
    fn flat_index_is_row_major() {
        assert_eq!(w(&[]).flat_index(), 0);
        assert_eq!(w(&[1, 1]).flat_index(), 0);
        assert_eq!(w(&[2, 3]).flat_index(), 5);
        assert_eq!(w(&[3, 1, 2]).flat_index(), 19);
    }
}
