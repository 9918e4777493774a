use crate::MeasureError;

/// Ordered finite alphabet. Letters are referred to by their index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

/// A word is a sequence of letter indices into some [`Alphabet`].
pub type Word = Vec<u8>;

impl Alphabet {
    pub fn new(symbols: Vec<char>) -> Result<Self, MeasureError> {
        if symbols.is_empty() {
            return Err(MeasureError::Invalid("alphabet must be nonempty".into()));
        }
        if symbols.len() > 255 {
            return Err(MeasureError::Invalid("alphabet too large".into()));
        }
        for (i, a) in symbols.iter().enumerate() {
            if symbols[..i].contains(a) {
                return Err(MeasureError::Invalid(format!("duplicate symbol {a:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// `{0, 1}`
    pub fn binary() -> Self {
        Alphabet { symbols: vec!['0', '1'] }
    }

    /// Symbols `0..k` written as decimal digits then lowercase letters.
    pub fn of_size(k: usize) -> Self {
        let digits = "0123456789abcdefghijklmnopqrstuvwxyz";
        assert!(k >= 1 && k <= digits.len());
        Alphabet { symbols: digits.chars().take(k).collect() }
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, letter: u8) -> char {
        self.symbols[letter as usize]
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, MeasureError> {
        s.chars()
            .map(|c| {
                self.index_of(c)
                    .ok_or_else(|| MeasureError::AlphabetMismatch(format!("symbol {c:?} not in alphabet")))
            })
            .collect()
    }

    pub fn format_word(&self, w: &[u8]) -> String {
        w.iter().map(|&a| self.symbol(a)).collect()
    }

    pub fn check_word(&self, w: &[u8]) -> Result<(), MeasureError> {
        match w.iter().find(|&&a| a as usize >= self.size()) {
            Some(a) => Err(MeasureError::AlphabetMismatch(format!("letter {a} out of range"))),
            None => Ok(()),
        }
    }

    /// All words of length `n` in lexicographic order.
    pub fn words(&self, n: usize) -> WordIter {
        WordIter { k: self.size() as u8, cur: Some(vec![0; n]) }
    }

    /// Rank of `w` among words of its length (base-|A| number, first letter most significant).
    pub fn rank(&self, w: &[u8]) -> usize {
        let k = self.size();
        w.iter().fold(0usize, |acc, &a| acc * k + a as usize)
    }

    pub fn unrank(&self, mut r: usize, n: usize) -> Word {
        let k = self.size();
        let mut w = vec![0u8; n];
        for i in (0..n).rev() {
            w[i] = (r % k) as u8;
            r /= k;
        }
        w
    }

    pub fn count(&self, n: usize) -> usize {
        self.size().pow(n as u32)
    }
}

pub struct WordIter {
    k: u8,
    cur: Option<Word>,
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let out = self.cur.clone()?;
        let mut w = out.clone();
        let mut i = w.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            w[i] += 1;
            if w[i] < self.k {
                self.cur = Some(w);
                break;
            }
            w[i] = 0;
        }
        Some(out)
    }
}

/// Cyclic left rotation, `rotate("abc", 1) = "bca"`.
pub fn rotate(w: &[u8], by: usize) -> Word {
    if w.is_empty() {
        return Vec::new();
    }
    let by = by % w.len();
    w[by..].iter().chain(&w[..by]).copied().collect()
}
