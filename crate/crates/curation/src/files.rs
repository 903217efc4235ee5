//! Substitution parameter files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use snbkit_core::{ParamValue, QueryFamily, QueryTemplateId, ReadQuery};

use crate::error::{io, CurationError};

pub const PARAMS_DIR: &str = "substitution_parameters";

/// Bindings per template in file order.
pub type ParameterSet = BTreeMap<QueryTemplateId, Vec<ReadQuery>>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParamFormat {
    /// Header row of parameter names, then `|`-separated values.
    #[default]
    Pipe,
    /// One JSON object per line keyed by parameter name.
    Json,
}

pub fn file_name(t: QueryTemplateId) -> String {
    format!("{}_param.txt", t.file_stem())
}

fn template_of(name: &str) -> Option<QueryTemplateId> {
    let stem = name.strip_suffix("_param.txt")?;
    let (family, n) = if let Some(n) = stem.strip_prefix("interactive_short_") {
        (QueryFamily::Is, n)
    } else if let Some(n) = stem.strip_prefix("interactive_") {
        (QueryFamily::Ic, n)
    } else {
        (QueryFamily::Bi, stem.strip_prefix("bi_")?)
    };
    QueryTemplateId::new(family, n.parse().ok()?)
}

fn render(t: QueryTemplateId, bindings: &[ReadQuery], format: ParamFormat) -> String {
    let names = ReadQuery::param_names(t);
    let mut out = String::new();
    match format {
        ParamFormat::Pipe => {
            out.push_str(&names.join("|"));
            out.push('\n');
            for q in bindings {
                out.push_str(&q.param_texts().join("|"));
                out.push('\n');
            }
        }
        ParamFormat::Json => {
            for q in bindings {
                let obj: serde_json::Map<String, serde_json::Value> = names
                    .iter()
                    .zip(q.params())
                    .map(|(n, v)| (n.to_string(), serde_json::to_value(v).expect("parameter values serialize")))
                    .collect();
                out.push_str(&serde_json::Value::Object(obj).to_string());
                out.push('\n');
            }
        }
    }
    out
}

/// Writes one file per template under `dir/substitution_parameters/` and
/// returns the paths relative to `dir`.
pub fn write_parameter_files(params: &ParameterSet, dir: &Path, format: ParamFormat) -> Result<Vec<PathBuf>, CurationError> {
    let root = dir.join(PARAMS_DIR);
    fs::create_dir_all(&root).map_err(io(&root))?;
    let mut manifest = Vec::new();
    for (t, bindings) in params {
        let rel = Path::new(PARAMS_DIR).join(file_name(*t));
        let path = dir.join(&rel);
        fs::write(&path, render(*t, bindings, format)).map_err(io(&path))?;
        manifest.push(rel);
    }
    Ok(manifest)
}

/// Parses one parameter file in either format.
pub fn read_parameter_file(path: &Path, t: QueryTemplateId) -> Result<Vec<ReadQuery>, CurationError> {
    let text = fs::read_to_string(path).map_err(io(path))?;
    let parse = |line: usize, reason: String| CurationError::Parse { file: path.to_path_buf(), line: line as u64 + 1, reason };
    let names = ReadQuery::param_names(t);
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).peekable();
    let json = lines.peek().is_some_and(|(_, l)| l.starts_with('{'));
    if !json {
        if let Some((i, header)) = lines.next() {
            if header.split('|').ne(names.iter().copied()) {
                return Err(parse(i, format!("expected header {:?}", names.join("|"))));
            }
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let q = if json {
            let mut obj: BTreeMap<String, ParamValue> = serde_json::from_str(line).map_err(|e| parse(i, e.to_string()))?;
            let values = names
                .iter()
                .map(|n| obj.remove(*n).ok_or_else(|| parse(i, format!("missing {n}"))))
                .collect::<Result<Vec<_>, _>>()?;
            ReadQuery::from_params(t, &values)
        } else {
            ReadQuery::from_texts(t, &line.split('|').collect::<Vec<_>>())
        };
        out.push(q.map_err(|e| parse(i, e.to_string()))?);
    }
    Ok(out)
}

/// Reads every recognised parameter file under `dir/substitution_parameters/`.
pub fn read_parameter_files(dir: &Path) -> Result<ParameterSet, CurationError> {
    let root = dir.join(PARAMS_DIR);
    let mut out = ParameterSet::new();
    for entry in fs::read_dir(&root).map_err(io(&root))? {
        let path = entry.map_err(io(&root))?.path();
        let Some(t) = path.file_name().and_then(|n| n.to_str()).and_then(template_of) else {
            continue;
        };
        out.insert(t, read_parameter_file(&path, t)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_names_map_back_to_templates() {
        for t in QueryTemplateId::all() {
            assert_eq!(template_of(&file_name(t)), Some(t));
        }
        assert_eq!(template_of("bi_26_param.txt"), None);
        assert_eq!(template_of("notes.txt"), None);
    }
}
