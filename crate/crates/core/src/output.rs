//! Serialization of results: flat JSON/CSV records for single points, the
//! scan grid as CSV, and an SVG rendering of the region maps.
//!
//! Reals are always written with 17 significant digits so that every value
//! reads back to the same double.

use std::io::{Read, Write};

use serde_json::{Map, Number, Value};

use crate::correlators::CorrelatorSet;
use crate::ensemble::Thermalization;
use crate::entanglement::{Detector, WitnessReport};
use crate::error::{Error, Result};
use crate::scan::{Region, RegionMap, ScanOutput};

/// `x` with 17 significant digits; `inf`, `-inf` and `NaN` as Rust prints them.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Real(f64),
    Text(String),
}

/// Ordered key/value row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record {
    pub fields: Vec<(String, Field)>,
}

impl Record {
    pub fn real(mut self, key: &str, x: f64) -> Self {
        self.fields.push((key.into(), Field::Real(x)));
        self
    }

    pub fn text(mut self, key: &str, s: impl Into<String>) -> Self {
        self.fields.push((key.into(), Field::Text(s.into())));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// One JSON object; non-finite reals become strings.
    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        for (k, v) in &self.fields {
            let v = match v {
                Field::Real(x) if x.is_finite() => {
                    Value::Number(fmt_real(*x).parse::<Number>().expect("formatted real is a JSON number"))
                }
                Field::Real(x) => Value::String(fmt_real(*x)),
                Field::Text(s) => Value::String(s.clone()),
            };
            m.insert(k.clone(), v);
        }
        Value::Object(m).to_string()
    }

    /// Header line plus one data line.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.fields.iter().map(|(k, _)| k.as_str())).expect("in-memory write");
        w.write_record(self.fields.iter().map(|(_, v)| match v {
            Field::Real(x) => fmt_real(*x),
            Field::Text(s) => s.clone(),
        }))
        .expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }
}

pub fn correlators_record(c: &CorrelatorSet) -> Record {
    Record::default()
        .real("g_c", c.g_c)
        .real("g_s", c.g_s)
        .real("g_0", c.g_0)
        .real("sxsx", c.sxsx)
        .real("sysy", c.sysy)
        .real("szsz", c.szsz)
        .real("sz", c.sz)
}

pub fn witness_record(r: &WitnessReport) -> Record {
    Record::default()
        .real("mu1", r.mu1)
        .real("mu2", r.mu2)
        .real("negativity", r.negativity)
        .text("detection", r.detection.name())
}

/// `signed_energy` is the energy density actually injected by the quench.
pub fn thermalization_record(th: &Thermalization, signed_energy: f64) -> Record {
    Record::default()
        .real("t_th", th.temperature.value())
        .real("lhs", th.target)
        .real("ground", th.ground)
        .real("residual", th.residual)
        .real("signed_energy", signed_energy)
}

pub const SCAN_CSV_HEADER: [&str; 12] = [
    "h0", "h", "t_th", "pre_mu1", "pre_mu2", "pre_neg", "th_mu1", "th_mu2", "th_neg", "class_mu1", "class_mu2",
    "status",
];

/// One line of the scan CSV. Numeric and class columns are empty for failed
/// cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub h0: f64,
    pub h: f64,
    pub t_th: Option<f64>,
    pub pre_mu1: Option<f64>,
    pub pre_mu2: Option<f64>,
    pub pre_neg: Option<f64>,
    pub th_mu1: Option<f64>,
    pub th_mu2: Option<f64>,
    pub th_neg: Option<f64>,
    pub class_mu1: Option<Region>,
    pub class_mu2: Option<Region>,
    pub status: String,
}

impl ScanRow {
    fn fields(&self) -> [String; 12] {
        let opt = |x: Option<f64>| x.map(fmt_real).unwrap_or_default();
        let class = |r: Option<Region>| r.map(|r| r.name().to_string()).unwrap_or_default();
        [
            fmt_real(self.h0),
            fmt_real(self.h),
            opt(self.t_th),
            opt(self.pre_mu1),
            opt(self.pre_mu2),
            opt(self.pre_neg),
            opt(self.th_mu1),
            opt(self.th_mu2),
            opt(self.th_neg),
            class(self.class_mu1),
            class(self.class_mu2),
            self.status.clone(),
        ]
    }

    fn parse(rec: &csv::StringRecord) -> Result<Self> {
        let bad = |what: &str| Error::InvalidParameter(format!("scan csv: bad {what} in {rec:?}"));
        if rec.len() != SCAN_CSV_HEADER.len() {
            return Err(bad("column count"));
        }
        let real = |k: usize| rec[k].parse::<f64>().map_err(|_| bad(SCAN_CSV_HEADER[k]));
        let opt = |k: usize| if rec[k].is_empty() { Ok(None) } else { real(k).map(Some) };
        let class = |k: usize| {
            if rec[k].is_empty() {
                Ok(None)
            } else {
                Region::parse(&rec[k]).map(Some).ok_or_else(|| bad(SCAN_CSV_HEADER[k]))
            }
        };
        Ok(Self {
            h0: real(0)?,
            h: real(1)?,
            t_th: opt(2)?,
            pre_mu1: opt(3)?,
            pre_mu2: opt(4)?,
            pre_neg: opt(5)?,
            th_mu1: opt(6)?,
            th_mu2: opt(7)?,
            th_neg: opt(8)?,
            class_mu1: class(9)?,
            class_mu2: class(10)?,
            status: rec[11].to_string(),
        })
    }
}

pub fn scan_rows(scan: &ScanOutput) -> Vec<ScanRow> {
    let m1 = scan.region_map(Detector::Mu1);
    let m2 = scan.region_map(Detector::Mu2);
    scan.cells
        .iter()
        .enumerate()
        .map(|(k, e)| match &e.result {
            Ok(c) => ScanRow {
                h0: e.h0,
                h: e.h,
                t_th: Some(c.t_th),
                pre_mu1: Some(c.prethermal.mu1),
                pre_mu2: Some(c.prethermal.mu2),
                pre_neg: Some(c.prethermal.negativity),
                th_mu1: Some(c.thermal.mu1),
                th_mu2: Some(c.thermal.mu2),
                th_neg: Some(c.thermal.negativity),
                class_mu1: m1.cells[k],
                class_mu2: m2.cells[k],
                status: "ok".into(),
            },
            Err(err) => ScanRow {
                h0: e.h0,
                h: e.h,
                t_th: None,
                pre_mu1: None,
                pre_mu2: None,
                pre_neg: None,
                th_mu1: None,
                th_mu2: None,
                th_neg: None,
                class_mu1: None,
                class_mu2: None,
                status: format!("failed: {err}"),
            },
        })
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidParameter(format!("scan csv: {e}"))
}

pub fn write_scan_rows<W: Write>(out: W, rows: &[ScanRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCAN_CSV_HEADER).map_err(csv_error)?;
    for r in rows {
        w.write_record(r.fields()).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::InvalidParameter(format!("scan csv: {e}")))
}

pub fn write_scan_csv<W: Write>(out: W, scan: &ScanOutput) -> Result<()> {
    write_scan_rows(out, &scan_rows(scan))
}

pub fn read_scan_csv<R: Read>(input: R) -> Result<Vec<ScanRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_error)?;
    if header.iter().ne(SCAN_CSV_HEADER) {
        return Err(Error::InvalidParameter(format!("scan csv: unexpected header {header:?}")));
    }
    r.records().map(|rec| ScanRow::parse(&rec.map_err(csv_error)?)).collect()
}

pub const COLOR_NEITHER: &str = "#ffffff";
pub const COLOR_PRETHERMAL: &str = "#8e44ad";
pub const COLOR_THERMAL: &str = "#27ae60";
pub const COLOR_FAILED: &str = "#9e9e9e";

const CELL_PX: f64 = 6.0;
const MARGIN_PX: f64 = 40.0;
const LEGEND_PX: f64 = 110.0;

fn fill(r: Option<Region>) -> &'static str {
    match r {
        None => COLOR_FAILED,
        Some(Region::Neither) => COLOR_NEITHER,
        Some(Region::PrethermalOnly) => COLOR_PRETHERMAL,
        Some(Region::ThermalOnly) => COLOR_THERMAL,
        Some(Region::Both) => "url(#both)",
    }
}

fn map_svg(out: &mut String, map: &RegionMap, scan: &ScanOutput, x0: f64, y0: f64) {
    let w = map.cols as f64 * CELL_PX;
    let h = map.rows as f64 * CELL_PX;
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{} &lt; 0</text>\n",
        x0 + w / 2.0,
        y0 - 8.0,
        map.detector.name()
    ));
    // h along x, h0 along y growing upwards
    for i in 0..map.rows {
        for j in 0..map.cols {
            out.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{CELL_PX}\" height=\"{CELL_PX}\" fill=\"{}\"/>\n",
                x0 + j as f64 * CELL_PX,
                y0 + (map.rows - 1 - i) as f64 * CELL_PX,
                fill(map.get(i, j))
            ));
        }
    }
    out.push_str(&format!(
        "<rect x=\"{x0}\" y=\"{y0}\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    let (h_lo, h_hi) = (scan.config.h_range.lo, scan.config.h_range.hi);
    let (h0_lo, h0_hi) = (scan.config.h0_range.lo, scan.config.h0_range.hi);
    out.push_str(&format!(
        "<text x=\"{x0}\" y=\"{}\" font-size=\"10\">h = {h_lo}</text>\n<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{h_hi}</text>\n",
        y0 + h + 14.0,
        x0 + w,
        y0 + h + 14.0
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">h0 = {h0_lo}</text>\n<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{h0_hi}</text>\n",
        x0 - 4.0,
        y0 + h,
        x0 - 4.0,
        y0 + 10.0
    ));
}

/// Both region maps side by side with a legend.
pub fn scan_svg(scan: &ScanOutput) -> String {
    let maps = [scan.region_map(Detector::Mu1), scan.region_map(Detector::Mu2)];
    let (rows, cols) = scan.dims();
    let map_w = cols as f64 * CELL_PX;
    let map_h = rows as f64 * CELL_PX;
    let width = 3.0 * MARGIN_PX + 2.0 * map_w + LEGEND_PX;
    let height = 2.0 * MARGIN_PX + map_h.max(100.0);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    );
    s.push_str(&format!(
        "<defs><pattern id=\"both\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">\
<rect width=\"3\" height=\"6\" fill=\"{COLOR_PRETHERMAL}\"/><rect x=\"3\" width=\"3\" height=\"6\" fill=\"{COLOR_THERMAL}\"/></pattern></defs>\n"
    ));
    s.push_str(&format!("<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"));
    for (k, m) in maps.iter().enumerate() {
        map_svg(&mut s, m, scan, MARGIN_PX + k as f64 * (map_w + MARGIN_PX), MARGIN_PX);
    }
    let lx = 3.0 * MARGIN_PX + 2.0 * map_w - 10.0;
    let entries = [
        (COLOR_NEITHER, "neither"),
        (COLOR_PRETHERMAL, "prethermal only"),
        (COLOR_THERMAL, "thermal only"),
        ("url(#both)", "both"),
        (COLOR_FAILED, "failed"),
    ];
    for (k, (color, label)) in entries.iter().enumerate() {
        let y = MARGIN_PX + k as f64 * 18.0;
        s.push_str(&format!(
            "<rect x=\"{lx}\" y=\"{y}\" width=\"12\" height=\"12\" fill=\"{color}\" stroke=\"black\"/><text x=\"{}\" y=\"{}\" font-size=\"11\">{label}</text>\n",
            lx + 16.0,
            y + 10.0
        ));
    }
    s.push_str("</svg>\n");
    s
}
