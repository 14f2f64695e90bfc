//! Plain-text model files.
//!
//! One record per line, a keyword followed by whitespace-separated values.
//! Reals are written in their shortest round-trip decimal form, so a loaded
//! model reproduces every decision of the saved one bit for bit.
//!
//! ```text
//! eocc-model 1
//! measure weighted_euclidean
//! tconorm max
//! normalizer 2.5
//! params 2 0.9 0.25
//! scaling 2
//! mean 5.0 3.4
//! std 0.35 0.38
//! reps 2
//! f 5.1 3.5
//! f 4.9 3.0
//! regions 1
//! region 0.12 2 0.0 0.4
//! members 2 0 1
//! end
//! ```
//!
//! `scaling none` marks a model without feature standardization. Graph
//! representatives are written as `graph <vertices> <edges>` followed by that
//! many `v <id> <label...>` and `e <src> <dst> <label...>` lines. Blank lines
//! and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::data::Standardizer;
use crate::dissimilarity::{Edge, LabeledGraph, Measure, Params, Pattern, Vertex};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyRegion, OccModel, TConorm};

pub const FORMAT_TAG: &str = "eocc-model";
pub const FORMAT_VERSION: u32 = 1;

fn push_reals(out: &mut String, values: &[f64]) {
    for v in values {
        write!(out, " {v}").unwrap();
    }
}

pub fn render_model(model: &OccModel) -> String {
    let mut out = String::new();
    writeln!(out, "{FORMAT_TAG} {FORMAT_VERSION}").unwrap();
    writeln!(out, "measure {}", model.measure.name()).unwrap();
    writeln!(out, "tconorm {}", model.tconorm.name()).unwrap();
    writeln!(out, "normalizer {}", model.normalizer).unwrap();
    write!(out, "params {}", model.params.len()).unwrap();
    push_reals(&mut out, model.params.values());
    out.push('\n');
    match &model.scaling {
        None => out.push_str("scaling none\n"),
        Some(s) => {
            writeln!(out, "scaling {}", s.mean.len()).unwrap();
            out.push_str("mean");
            push_reals(&mut out, &s.mean);
            out.push_str("\nstd");
            push_reals(&mut out, &s.std);
            out.push('\n');
        }
    }
    writeln!(out, "reps {}", model.reps.len()).unwrap();
    for r in &model.reps {
        match r {
            Pattern::Features(x) => {
                out.push('f');
                push_reals(&mut out, x);
                out.push('\n');
            }
            Pattern::Graph(g) => {
                writeln!(out, "graph {} {}", g.vertices().len(), g.edges().len()).unwrap();
                for v in g.vertices() {
                    write!(out, "v {}", v.id).unwrap();
                    push_reals(&mut out, &v.label);
                    out.push('\n');
                }
                for e in g.edges() {
                    write!(out, "e {} {}", e.src, e.dst).unwrap();
                    push_reals(&mut out, &e.label);
                    out.push('\n');
                }
            }
        }
    }
    writeln!(out, "regions {}", model.regions.len()).unwrap();
    for r in &model.regions {
        write!(out, "region {} {}", r.tau, r.representative.len()).unwrap();
        push_reals(&mut out, &r.representative);
        write!(out, "\nmembers {}", r.members.len()).unwrap();
        for m in &r.members {
            write!(out, " {m}").unwrap();
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

pub fn save_model(model: &OccModel, path: &Path) -> Result<()> {
    fs::write(path, render_model(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<OccModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(path, &text)
}

struct Lines<'a> {
    path: PathBuf,
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(path: &Path, text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines {
            path: path.to_path_buf(),
            inner: it.peekable(),
        }
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.path.clone(), line, msg)
    }

    /// Next line, which must start with `keyword`; returns the remaining fields.
    fn expect(&mut self, keyword: &str) -> Result<(usize, Vec<&'a str>)> {
        let (line, text) = self
            .inner
            .next()
            .ok_or_else(|| self.err(0, format!("unexpected end of file, expected `{keyword}`")))?;
        let mut fields = text.split_whitespace();
        match fields.next() {
            Some(k) if k == keyword => Ok((line, fields.collect())),
            other => Err(self.err(
                line,
                format!("expected `{keyword}`, found `{}`", other.unwrap_or("")),
            )),
        }
    }

    fn peek_keyword(&mut self) -> Option<&'a str> {
        self.inner.peek().and_then(|(_, l)| l.split_whitespace().next())
    }

    fn reals(&self, line: usize, fields: &[&str]) -> Result<Vec<f64>> {
        fields
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| self.err(line, format!("invalid real `{f}`")))
            })
            .collect()
    }

    fn count(&self, line: usize, field: Option<&&str>) -> Result<usize> {
        let f = field.ok_or_else(|| self.err(line, "missing count"))?;
        f.parse().map_err(|_| self.err(line, format!("invalid count `{f}`")))
    }

    /// `<count> v1 .. v_count`
    fn counted_reals(&self, line: usize, fields: &[&str]) -> Result<Vec<f64>> {
        let n = self.count(line, fields.first())?;
        if fields.len() != n + 1 {
            return Err(self.err(line, format!("expected {n} values, found {}", fields.len().saturating_sub(1))));
        }
        self.reals(line, &fields[1..])
    }

    fn single<'b>(&self, line: usize, fields: &[&'b str]) -> Result<&'b str> {
        match fields {
            [x] => Ok(x),
            _ => Err(self.err(line, "expected exactly one value")),
        }
    }
}

pub fn parse_model(path: &Path, text: &str) -> Result<OccModel> {
    let mut lines = Lines::new(path, text);

    let (line, fields) = lines.expect(FORMAT_TAG)?;
    let version = lines.single(line, &fields)?;
    if version != FORMAT_VERSION.to_string() {
        return Err(lines.err(line, format!("unsupported model version {version}")));
    }

    let (line, fields) = lines.expect("measure")?;
    let name = lines.single(line, &fields)?;
    let measure = Measure::from_name(name).ok_or_else(|| lines.err(line, format!("unknown measure `{name}`")))?;

    let (line, fields) = lines.expect("tconorm")?;
    let name = lines.single(line, &fields)?;
    let tconorm = TConorm::from_name(name).ok_or_else(|| lines.err(line, format!("unknown t-conorm `{name}`")))?;

    let (line, fields) = lines.expect("normalizer")?;
    let normalizer = lines.reals(line, &[lines.single(line, &fields)?])?[0];

    let (line, fields) = lines.expect("params")?;
    let params = Params::new(lines.counted_reals(line, &fields)?).map_err(|e| lines.err(line, e.to_string()))?;

    let (line, fields) = lines.expect("scaling")?;
    let scaling = if fields == ["none"] {
        None
    } else {
        let u = lines.count(line, fields.first())?;
        let (line, fields) = lines.expect("mean")?;
        let mean = lines.reals(line, &fields)?;
        let (line2, fields) = lines.expect("std")?;
        let std = lines.reals(line2, &fields)?;
        if mean.len() != u || std.len() != u {
            return Err(lines.err(line, format!("scaling statistics must have {u} entries")));
        }
        Some(Standardizer { mean, std })
    };

    let (line, fields) = lines.expect("reps")?;
    let n_reps = lines.count(line, fields.first())?;
    let mut reps = Vec::with_capacity(n_reps);
    for _ in 0..n_reps {
        match lines.peek_keyword() {
            Some("f") => {
                let (line, fields) = lines.expect("f")?;
                reps.push(Pattern::Features(lines.reals(line, &fields)?));
            }
            Some("graph") => {
                let (line, fields) = lines.expect("graph")?;
                let nv = lines.count(line, fields.first())?;
                let ne = lines.count(line, fields.get(1))?;
                let mut vertices = Vec::with_capacity(nv);
                for _ in 0..nv {
                    let (l, f) = lines.expect("v")?;
                    let id = lines.count(l, f.first())? as u64;
                    vertices.push(Vertex {
                        id,
                        label: lines.reals(l, &f[1..])?,
                    });
                }
                let mut edges = Vec::with_capacity(ne);
                for _ in 0..ne {
                    let (l, f) = lines.expect("e")?;
                    if f.len() < 2 {
                        return Err(lines.err(l, "edge needs two endpoints"));
                    }
                    edges.push(Edge {
                        src: lines.count(l, f.first())? as u64,
                        dst: lines.count(l, f.get(1))? as u64,
                        label: lines.reals(l, &f[2..])?,
                    });
                }
                let g = LabeledGraph::new(vertices, edges).map_err(|e| lines.err(line, e.to_string()))?;
                reps.push(Pattern::Graph(g));
            }
            other => {
                let (line, _) = lines.inner.peek().copied().unwrap_or((0, ""));
                return Err(lines.err(line, format!("expected a representative, found `{}`", other.unwrap_or("end of file"))));
            }
        }
    }

    let (line, fields) = lines.expect("regions")?;
    let k = lines.count(line, fields.first())?;
    let mut regions = Vec::with_capacity(k);
    for _ in 0..k {
        let (line, fields) = lines.expect("region")?;
        if fields.is_empty() {
            return Err(lines.err(line, "region needs a width"));
        }
        let tau = lines.reals(line, &fields[..1])?[0];
        let representative = lines.counted_reals(line, &fields[1..])?;
        let (line, fields) = lines.expect("members")?;
        let n = lines.count(line, fields.first())?;
        if fields.len() != n + 1 {
            return Err(lines.err(line, format!("expected {n} member indices")));
        }
        let members = fields[1..]
            .iter()
            .map(|f| lines.count(line, Some(f)))
            .collect::<Result<Vec<_>>>()?;
        regions.push(FuzzyRegion {
            representative,
            tau,
            members,
        });
    }
    lines.expect("end")?;

    let model = OccModel {
        measure,
        params,
        reps,
        normalizer,
        regions,
        tconorm,
        scaling,
    };
    model.validate().map_err(|e| lines.err(0, e.to_string()))?;
    Ok(model)
}
