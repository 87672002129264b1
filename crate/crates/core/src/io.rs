//! External formats: matrices as JSON (row-major arrays of `[re, im]`
//! pairs) and radial profiles as CSV (`t_1..t_r, re, im`).

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::geometry::{cartan, iwasawa, CMat, Geometry, GroupElement};
use crate::transforms::RadialProfile;
use crate::{Error, Result, C64};

/// Largest accepted matrix side; `n = 2r + b` stays far below it.
pub const MAX_MATRIX_SIDE: usize = 64;
pub const MAX_PROFILE_ROWS: usize = 1 << 20;

fn parse_err(s: impl Into<String>) -> Error {
    Error::Parse(s.into())
}

fn entry(v: &Value) -> Result<C64> {
    let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| parse_err("entry must be [re, im]"))?;
    let re = pair[0].as_f64().ok_or_else(|| parse_err("re is not a number"))?;
    let im = pair[1].as_f64().ok_or_else(|| parse_err("im is not a number"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(parse_err("non-finite entry"));
    }
    Ok(C64::new(re, im))
}

pub fn parse_matrix_json(s: &str) -> Result<CMat> {
    let v: Value = serde_json::from_str(s).map_err(|e| parse_err(e.to_string()))?;
    let rows = v.as_array().ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    let n = rows.len();
    if n == 0 || n > MAX_MATRIX_SIDE {
        return Err(parse_err(format!("matrix side {n} outside 1..={MAX_MATRIX_SIDE}")));
    }
    let mut m = CMat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| parse_err(format!("row {i} is not an array")))?;
        if row.len() != n {
            return Err(parse_err(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = entry(e).map_err(|e| parse_err(format!("entry ({i},{j}): {e}")))?;
        }
    }
    Ok(m)
}

pub fn matrix_to_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| serde_json::json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

/// The group element encoded by a matrix JSON document, with `b` read off
/// the size `n = 2r + b`.
pub fn parse_group_element(s: &str, r: usize) -> Result<GroupElement> {
    let m = parse_matrix_json(s)?;
    let n = m.nrows();
    if n < 2 * r {
        return Err(parse_err(format!("a {n}x{n} matrix cannot have rank {r}")));
    }
    let geom = Geometry::new(r, n - 2 * r)?;
    GroupElement::new(geom, m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IwasawaJson {
    pub k: Value,
    pub h: Vec<f64>,
    pub n: Value,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanJson {
    pub k1: Value,
    pub t: Vec<f64>,
    pub k2: Value,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub r: usize,
    pub b: usize,
    pub iwasawa: IwasawaJson,
    pub cartan: CartanJson,
}

/// Iwasawa `g = k exp(H) n` and Cartan `g = k1 exp(H_T) k2`, each with its
/// reconstruction residual `max |g - product|`.
pub fn decompose(g: &GroupElement) -> Result<Decomposition> {
    let geom = g.geom();
    let iw = iwasawa(g)?;
    let ca = cartan(g)?;
    Ok(Decomposition {
        r: geom.r,
        b: geom.b,
        iwasawa: IwasawaJson {
            k: matrix_to_json(&iw.k.to_matrix()),
            h: iw.h.clone(),
            n: matrix_to_json(iw.n_part.matrix()),
            residual: iw.compose().dist_max(g),
        },
        cartan: CartanJson {
            k1: matrix_to_json(&ca.k1.to_matrix()),
            t: ca.h.0.clone(),
            k2: matrix_to_json(&ca.k2.to_matrix()),
            residual: ca.compose().dist_max(g),
        },
    })
}

/// Rows `(t, value)` of a profile CSV with header `t_1..t_r,re,im`.
pub fn parse_profile_rows(s: &str, r: usize) -> Result<Vec<(Vec<f64>, C64)>> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(s.as_bytes());
    let header = rd.headers().map_err(|e| parse_err(e.to_string()))?.clone();
    let expect: Vec<String> = (1..=r).map(|j| format!("t_{j}")).chain(["re".into(), "im".into()]).collect();
    if header.iter().collect::<Vec<_>>() != expect.iter().map(|s| s.as_str()).collect::<Vec<_>>() {
        return Err(parse_err(format!("header must be {}", expect.join(","))));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        if i >= MAX_PROFILE_ROWS {
            return Err(parse_err("too many rows"));
        }
        let rec = rec.map_err(|e| parse_err(e.to_string()))?;
        let nums: Vec<f64> = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| parse_err(format!("row {}: '{f}' is not a number", i + 1))))
            .collect::<Result<_>>()?;
        if let Some(x) = nums.iter().find(|x| !x.is_finite()) {
            return Err(parse_err(format!("row {}: non-finite value {x}", i + 1)));
        }
        if nums.len() != r + 2 {
            return Err(parse_err(format!("row {} has {} fields", i + 1, nums.len())));
        }
        rows.push((nums[..r].to_vec(), C64::new(nums[r], nums[r + 1])));
    }
    Ok(rows)
}

pub fn read_profile_csv(geom: Geometry, s: &str) -> Result<RadialProfile> {
    RadialProfile::from_table(geom, &parse_profile_rows(s, geom.r)?)
}

pub fn write_profile_csv(r: usize, rows: &[(Vec<f64>, C64)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = (1..=r).map(|j| format!("t_{j}")).chain(["re".into(), "im".into()]).collect();
    w.write_record(&header).map_err(|e| Error::Io(e.to_string()))?;
    for (t, v) in rows {
        let rec: Vec<String> = t.iter().chain([&v.re, &v.im]).map(|x| format!("{x:e}")).collect();
        w.write_record(&rec).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}
