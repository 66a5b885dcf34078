use super::{Chart, Field};
use crate::error::{Error, Result};

/// A full assignment of field values to the variables of a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<C> {
    chart: Chart,
    values: Vec<C>,
}

impl<C: Field> Point<C> {
    pub fn new<'a>(chart: &Chart, assignment: impl IntoIterator<Item = (&'a str, C)>) -> Result<Self> {
        let mut values: Vec<Option<C>> = vec![None; chart.dim()];
        for (name, value) in assignment {
            values[chart.var_index(name)?] = Some(value);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::MissingAssignment(chart.name(i).to_string())))
            .collect::<Result<_>>()?;
        Ok(Point {
            chart: chart.clone(),
            values,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn value(&self, idx: usize) -> &C {
        &self.values[idx]
    }
}
