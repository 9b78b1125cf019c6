//! Weight spec mini-language: `kind:key=value,...` followed by `~modifier` suffixes.
//!
//! Kinds: `const:c=1`, `std:gamma=0.5,norm=true`, `exp:c=1,alpha=1,l=1`, `dexp:c=1`,
//! `logri:alpha=2`, `table:file=PATH` (CSV rows `r,omega`).
//! Modifiers: `~reg`, `~tilt(beta)`, `~dot`, `~flip`, `~sigma(gamma,p)`, `~w(c,alpha)`.

use super::{DerivedOp, RadialWeight};
use crate::error::{Error, Result};

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

struct Params<'a> {
    items: Vec<(usize, &'a str, &'a str)>,
    used: Vec<bool>,
}

impl<'a> Params<'a> {
    fn parse(s: &'a str, offset: usize) -> Result<Params<'a>> {
        let mut items = vec![];
        let mut pos = offset;
        if !s.is_empty() {
            for part in s.split(',') {
                match part.split_once('=') {
                    Some((k, v)) if !k.trim().is_empty() => items.push((pos, k.trim(), v.trim())),
                    _ => return err(pos, format!("expected key=value, found '{part}'")),
                }
                pos += part.len() + 1;
            }
        }
        let used = vec![false; items.len()];
        Ok(Params { items, used })
    }

    fn raw(&mut self, key: &str) -> Option<(usize, &'a str)> {
        let i = self.items.iter().position(|(_, k, _)| *k == key)?;
        self.used[i] = true;
        Some((self.items[i].0, self.items[i].2))
    }

    fn num(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.raw(key) {
            Some((pos, v)) => v.parse::<f64>().or_else(|_| err(pos, format!("'{key}' expects a number, found '{v}'"))),
            None => default.map(Ok).unwrap_or_else(|| err(0, format!("missing parameter '{key}'"))),
        }
    }

    fn finish(&self) -> Result<()> {
        for (i, (pos, k, _)) in self.items.iter().enumerate() {
            if !self.used[i] {
                return err(*pos, format!("unknown parameter '{k}'"));
            }
        }
        Ok(())
    }
}

/// Parse a weight spec such as `std:gamma=1~tilt(2)`.
pub fn parse_weight(spec: &str) -> Result<RadialWeight> {
    let mut segments = spec.split('~');
    let base = segments.next().unwrap_or("");
    let (kind, params, poff) = match base.split_once(':') {
        Some((k, p)) => (k.trim(), p, k.len() + 1),
        None => (base.trim(), "", base.len()),
    };
    let mut p = Params::parse(params, poff)?;
    let build = |r: Result<RadialWeight>| r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse { pos: 0, msg: other.to_string() },
    });
    let mut w = match kind {
        "const" => build(RadialWeight::constant(p.num("c", Some(1.0))?))?,
        "std" => {
            let gamma = p.num("gamma", Some(0.0))?;
            let normalized = match p.raw("norm") {
                None | Some((_, "true")) => true,
                Some((_, "false")) => false,
                Some((pos, v)) => return err(pos, format!("'norm' expects true or false, found '{v}'")),
            };
            build(RadialWeight::standard(gamma, normalized))?
        }
        "exp" => {
            let c = p.num("c", Some(1.0))?;
            let alpha = p.num("alpha", Some(1.0))?;
            let l = p.num("l", Some(1.0))?;
            build(RadialWeight::exponential(c, alpha, l))?
        }
        "dexp" => build(RadialWeight::double_exponential(p.num("c", Some(1.0))?))?,
        "logri" => build(RadialWeight::log_rapid_increase(p.num("alpha", Some(2.0))?))?,
        "table" => {
            let (pos, path) = match p.raw("file") {
                Some(v) => v,
                None => return err(poff, "table weight needs file=PATH"),
            };
            let (r, v) = read_table(path).or_else(|m| err(pos, m))?;
            build(RadialWeight::tabulated(r, v))?
        }
        other => return err(0, format!("unknown weight kind '{other}'")),
    };
    p.finish()?;
    let mut pos = base.len();
    for seg in segments {
        pos += 1;
        let op = parse_modifier(seg, pos)?;
        w = build(w.derive(op))?;
        pos += seg.len();
    }
    Ok(w)
}

fn parse_modifier(seg: &str, pos: usize) -> Result<DerivedOp> {
    let (name, args) = match seg.find('(') {
        Some(i) => {
            if !seg.ends_with(')') {
                return err(pos + seg.len(), "missing ')'");
            }
            let inner = &seg[i + 1..seg.len() - 1];
            let mut vals = vec![];
            let mut off = pos + i + 1;
            for a in inner.split(',') {
                match a.trim().parse::<f64>() {
                    Ok(v) => vals.push(v),
                    Err(_) => return err(off, format!("expected a number, found '{a}'")),
                }
                off += a.len() + 1;
            }
            (&seg[..i], vals)
        }
        None => (seg, vec![]),
    };
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            err(pos, format!("modifier '{name}' takes {n} argument(s)"))
        }
    };
    match name.trim() {
        "reg" => arity(0).map(|_| DerivedOp::Regularized),
        "dot" => arity(0).map(|_| DerivedOp::Dot),
        "flip" => arity(0).map(|_| DerivedOp::BoundaryFlip),
        "tilt" => arity(1).map(|_| DerivedOp::Tilt(args[0])),
        "sigma" => arity(2).map(|_| DerivedOp::SigmaDual { gamma: args[0], p: args[1] }),
        "w" => arity(2).map(|_| DerivedOp::WClass { c: args[0], alpha: args[1] }),
        other => err(pos, format!("unknown modifier '{other}'")),
    }
}

fn read_table(path: &str) -> std::result::Result<(Vec<f64>, Vec<f64>), String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("cannot read table '{path}': {e}"))?;
    let (mut r, mut w) = (vec![], vec![]);
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.len() < 2 {
            return Err(format!("row {} needs two columns", i + 1));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => {
                r.push(a);
                w.push(b);
            }
            _ if i == 0 => continue,
            _ => return Err(format!("row {} is not numeric", i + 1)),
        }
    }
    Ok((r, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightKind;

    #[test]
    fn parses_kinds_and_modifiers() {
        let w = parse_weight("std:gamma=0.5,norm=true").unwrap();
        assert_eq!(w.kind(), &WeightKind::Standard { gamma: 0.5, normalized: true });
        let w = parse_weight("const:c=1~tilt(1)").unwrap();
        assert!((w.density(0.25) - 0.75).abs() < 1e-15);
        let w = parse_weight("std:gamma=0~sigma(0,2)").unwrap();
        assert!((w.density(0.3) - 1.0).abs() < 1e-14);
        assert!(parse_weight("exp:c=1,alpha=1,l=1~reg~dot").is_ok());
    }

    #[test]
    fn reports_positions() {
        match parse_weight("std:gamma=x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_weight("const:c=1~bogus") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_weight("nope"), Err(Error::Parse { .. })));
    }
}
