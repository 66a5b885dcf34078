use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq, Hash)]
struct ChartData {
    variables: Vec<String>,
    homogeneity: Option<usize>,
}

/// An ordered list of coordinate names, optionally with a distinguished
/// homogeneity coordinate `t` (the slice is `t = 1`).
///
/// Cloning is cheap; equality compares contents.
#[derive(Clone)]
pub struct Chart {
    inner: Arc<ChartData>,
}

impl Chart {
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::build(variables.into_iter().map(Into::into).collect(), None)
    }

    /// Chart whose coordinate `homogeneity` plays the role of `t`.
    pub fn with_homogeneity<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        homogeneity: &str,
    ) -> Result<Self> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let idx = variables
            .iter()
            .position(|v| v == homogeneity)
            .ok_or_else(|| {
                Error::InvalidChart(format!("homogeneity variable `{homogeneity}` is not a chart variable"))
            })?;
        Self::build(variables, Some(idx))
    }

    fn build(variables: Vec<String>, homogeneity: Option<usize>) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &variables {
            if v.is_empty() {
                return Err(Error::InvalidChart("empty variable name".into()));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidChart(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Chart {
            inner: Arc::new(ChartData {
                variables,
                homogeneity,
            }),
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.inner.variables
    }

    pub fn dim(&self) -> usize {
        self.inner.variables.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.inner.variables.iter().position(|v| v == name)
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.inner.variables[idx]
    }

    pub fn homogeneity_index(&self) -> Option<usize> {
        self.inner.homogeneity
    }

    pub fn homogeneity_variable(&self) -> Option<&str> {
        self.inner.homogeneity.map(|i| self.name(i))
    }

    /// The chart of the slice `t = 1`: the homogeneity coordinate removed.
    pub fn slice(&self) -> Result<Chart> {
        let t = self.homogeneity_index().ok_or(Error::NoHomogeneityVariable)?;
        let variables = self
            .variables()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != t)
            .map(|(_, v)| v.clone())
            .collect();
        Self::build(variables, None)
    }

    pub(crate) fn ensure_same(&self, other: &Chart) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for Chart {}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.variables().join(", "))?;
        if let Some(t) = self.homogeneity_variable() {
            write!(f, " homog {t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_unknown_homogeneity() {
        assert!(Chart::new(["x", "x"]).is_err());
        assert!(Chart::new([""]).is_err());
        assert!(Chart::with_homogeneity(["x", "y"], "t").is_err());
    }

    #[test]
    fn slice_drops_t() {
        let c = Chart::with_homogeneity(["q", "t", "p"], "t").unwrap();
        let s = c.slice().unwrap();
        assert_eq!(s.variables(), &["q".to_string(), "p".to_string()]);
        assert_eq!(s.homogeneity_index(), None);
        assert!(Chart::new(["x"]).unwrap().slice().is_err());
    }
}
