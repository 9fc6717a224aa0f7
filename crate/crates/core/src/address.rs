use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A server label `a_k ... a_0`, stored most significant digit first.
///
/// The rightmost digit ranges over `[0, n+m)`, every other digit over
/// `[0, n)`. Validity against a concrete graph is checked by
/// [`LogicGraph::index_of`](crate::LogicGraph::index_of).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Address {
    digits: Vec<u8>,
}

impl Address {
    pub fn new(digits: Vec<u8>) -> Self {
        Address { digits }
    }

    /// Digits from `a_k` down to `a_0`.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Digit `a_i`, counted from the right.
    pub fn digit(&self, i: usize) -> u8 {
        self.digits[self.digits.len() - 1 - i]
    }

    /// The order `k` of a graph this address belongs to.
    pub fn order(&self) -> usize {
        self.digits.len() - 1
    }

    /// Concatenated digits when every digit fits in one character
    /// (`n + m <= 10`), dot separated otherwise.
    pub fn render(&self, radix: usize) -> String {
        if radix <= 10 {
            self.digits.iter().map(|d| char::from(b'0' + d)).collect()
        } else {
            let parts: Vec<String> = self.digits.iter().map(u8::to_string).collect();
            parts.join(".")
        }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radix = if self.digits.iter().all(|&d| d < 10) {
            10
        } else {
            11
        };
        f.write_str(&self.render(radix))
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Address({self})")
    }
}

impl FromStr for Address {
    type Err = Error;

    /// Accepts `"13"`, `"1.3"`, `"1,3"` and `"[1,3]"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidAddress(s.to_string());
        let body = s
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .trim();
        if body.is_empty() {
            return Err(bad());
        }
        let digits = if body.contains(['.', ',']) {
            body.split(['.', ','])
                .map(|p| p.trim().parse::<u8>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            body.chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(Address::new(digits))
    }
}

/// Server role, decided by the rightmost digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    Core,
    Edge,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let a: Address = "13".parse().unwrap();
        assert_eq!(a.digits(), &[1, 3]);
        assert_eq!("1.3".parse::<Address>().unwrap(), a);
        assert_eq!("[1, 3]".parse::<Address>().unwrap(), a);
        assert_eq!("0,12".parse::<Address>().unwrap().digits(), &[0, 12]);
        assert!("".parse::<Address>().is_err());
        assert!("1x".parse::<Address>().is_err());
    }

    #[test]
    fn render_switches_on_radix() {
        let a = Address::new(vec![1, 0, 7]);
        assert_eq!(a.render(8), "107");
        assert_eq!(a.render(12), "1.0.7");
        assert_eq!(a.digit(0), 7);
        assert_eq!(a.digit(2), 1);
        assert_eq!(a.order(), 2);
    }

    #[test]
    fn serializes_as_integer_array() {
        let a = Address::new(vec![2, 0]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[2,0]");
        let back: Address = serde_json::from_str("[2,0]").unwrap();
        assert_eq!(back, a);
    }
}
