//! The JSON series document.
//!
//! ```json
//! { "algebra": {"kind": "matrix", "dim": 2},
//!   "degree": 2,
//!   "components": [ {"n": 0, "value": ["1", "0", "0", "1"]},
//!                   {"n": 1, "entries": [{"idx": [2], "value": ["1/2", "0", "0", "0"]}]} ] }
//! ```
//!
//! Missing entries are zero and `idx` is 0-based. A matrix element may also
//! be written as rows, `[["1", "0"], ["0", "1"]]`. A bare JSON array of
//! rationals is read as a scalar series whose coefficient `k` sits at
//! component `k`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{AlgebraElement, AlgebraKind, BaseAlgebra};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::MultSeries;
use crate::tensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum AlgebraDoc {
    Scalar,
    Matrix { dim: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ElementDoc {
    Single(Rational),
    Coords(Vec<Rational>),
    Rows(Vec<Vec<Rational>>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    idx: Vec<usize>,
    value: ElementDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<ElementDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDoc {
    algebra: AlgebraDoc,
    degree: usize,
    components: Vec<ComponentDoc>,
}

fn element(alg: &BaseAlgebra, doc: ElementDoc) -> Result<AlgebraElement> {
    let e = match doc {
        ElementDoc::Single(x) => AlgebraElement::new(vec![x]),
        ElementDoc::Coords(c) => AlgebraElement::new(c),
        ElementDoc::Rows(rows) => return alg.element_from_rows(&rows),
    };
    if e.dim() != alg.dim() {
        return Err(Error::Parse(format!(
            "element has {} coordinates, algebra {} has {}",
            e.dim(),
            alg.kind(),
            alg.dim()
        )));
    }
    Ok(e)
}

pub fn series_to_value(s: &MultSeries) -> Value {
    let algebra = match s.kind() {
        AlgebraKind::Scalar => AlgebraDoc::Scalar,
        AlgebraKind::Matrix(d) => AlgebraDoc::Matrix { dim: d },
    };
    let d = s.dim();
    let mut components = vec![ComponentDoc {
        n: 0,
        value: Some(ElementDoc::Coords(s.constant_term().into_coords())),
        entries: vec![],
    }];
    for n in 1..=s.degree() {
        let entries: Vec<EntryDoc> = (0..tensor::pow(d, n))
            .map(|i| tensor::index_to_tuple(d, n, i))
            .filter_map(|idx| {
                let v = s.value(n, &idx);
                (!v.is_zero()).then(|| EntryDoc {
                    idx,
                    value: ElementDoc::Coords(v.into_coords()),
                })
            })
            .collect();
        if !entries.is_empty() {
            components.push(ComponentDoc {
                n,
                value: None,
                entries,
            });
        }
    }
    let doc = SeriesDoc {
        algebra,
        degree: s.degree(),
        components,
    };
    serde_json::to_value(doc).expect("series documents serialize")
}

pub fn series_from_value(v: &Value) -> Result<MultSeries> {
    if let Value::Array(items) = v {
        let coeffs = items
            .iter()
            .map(|x| serde_json::from_value::<Rational>(x.clone()).map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient array".into()));
        }
        return Ok(MultSeries::from_scalar_coeffs(
            &Arc::new(BaseAlgebra::scalar()),
            &coeffs,
        ));
    }
    let doc: SeriesDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let alg = Arc::new(match doc.algebra {
        AlgebraDoc::Scalar => BaseAlgebra::scalar(),
        AlgebraDoc::Matrix { dim } => BaseAlgebra::matrix(dim)?,
    });
    let d = alg.dim();
    let mut s = MultSeries::zero(&alg, doc.degree);
    for comp in doc.components {
        if comp.n > doc.degree {
            return Err(Error::Parse(format!(
                "component {} above degree {}",
                comp.n, doc.degree
            )));
        }
        if let Some(value) = comp.value {
            if comp.n != 0 {
                return Err(Error::Parse(format!(
                    "component {} needs \"entries\", not \"value\"",
                    comp.n
                )));
            }
            s.set_value(0, &[], &element(&alg, value)?);
        }
        for entry in comp.entries {
            if entry.idx.len() != comp.n || entry.idx.iter().any(|&i| i >= d) {
                return Err(Error::Parse(format!(
                    "bad index {:?} for component {} over a {d}-dimensional algebra",
                    entry.idx, comp.n
                )));
            }
            s.set_value(comp.n, &entry.idx, &element(&alg, entry.value)?);
        }
    }
    Ok(s)
}

pub fn series_from_str(text: &str) -> Result<MultSeries> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    series_from_value(&v)
}

pub fn series_to_string(s: &MultSeries) -> String {
    serde_json::to_string_pretty(&series_to_value(s)).expect("series documents serialize")
}

/// Scalar coefficients as a JSON array of `"p/q"` strings.
pub fn scalar_array(s: &MultSeries) -> Value {
    serde_json::to_value(s.scalar_coeffs()).expect("rationals serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesClass;

    #[test]
    fn round_trip_matrix() {
        let alg = Arc::new(BaseAlgebra::matrix(2).unwrap());
        let f = MultSeries::random(SeriesClass::Ginv, &alg, 3, 9, 7);
        assert_eq!(series_from_str(&series_to_string(&f)).unwrap(), f);
    }

    #[test]
    fn scalar_array_form() {
        let s = series_from_str(r#"["1", "2", 5, "14"]"#).unwrap();
        assert_eq!(s.degree(), 3);
        assert_eq!(s.scalar_coeffs()[3], Rational::from_int(14));
        assert_eq!(series_from_value(&scalar_array(&s)).unwrap(), s);
    }

    #[test]
    fn rows_form_and_missing_entries() {
        let text = r#"{"algebra": {"kind": "matrix", "dim": 2}, "degree": 2,
            "components": [{"n": 0, "value": [["0", "1"], ["0", "0"]]},
                           {"n": 2, "entries": [{"idx": [1, 3], "value": ["1/2", 0, 0, 0]}]}]}"#;
        let s = series_from_str(text).unwrap();
        assert_eq!(s.constant_term().coords()[1], Rational::one());
        assert_eq!(s.value(2, &[1, 3]).coords()[0], Rational::new(1, 2));
        assert!(s.value(2, &[3, 1]).is_zero());
        assert!(s.component(1).iter().all(Rational::is_zero));
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            r#"{"algebra": {"kind": "matrix", "dim": 2}, "degree": 1, "components": [{"n": 2, "entries": []}]}"#,
            r#"{"algebra": {"kind": "matrix", "dim": 2}, "degree": 1, "components": [{"n": 1, "entries": [{"idx": [4], "value": [0,0,0,0]}]}]}"#,
            r#"{"algebra": {"kind": "scalar"}, "degree": 1, "components": [{"n": 0, "value": ["1", "2"]}]}"#,
            r#"{"algebra": {"kind": "octonion"}, "degree": 1, "components": []}"#,
            r#"["1/0"]"#,
        ] {
            assert!(series_from_str(bad).is_err(), "{bad}");
        }
    }
}
