//! Model expressions such as `os(n=3, uniform)` or
//! `copula(clayton, exp(2), weibull(shape=2, scale=1))`.

use std::fmt;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Arg {
    Num(f64),
    Expr(Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub name: String,
    pub args: Vec<(Option<String>, Arg)>,
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Num(v) => write!(f, "{v}"),
            Arg::Expr(e) => write!(f, "{e}"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, (key, arg)) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                if let Some(k) = key {
                    write!(f, "{k}=")?;
                }
                write!(f, "{arg}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '-' || c == '_'
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> CliError {
        CliError::Config(format!("model expression '{}': {msg} at offset {}", self.src, self.pos))
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn token(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !(is_ident_char(c) || c == '.' || c == '+')).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let name = self.token();
        if !name.starts_with(|c: char| c.is_ascii_alphabetic()) || !name.chars().all(is_ident_char) {
            return Err(self.err("expected a name"));
        }
        let mut args = Vec::new();
        if self.eat('(') {
            if !self.eat(')') {
                loop {
                    args.push(self.arg()?);
                    if self.eat(')') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err(self.err("expected ',' or ')'"));
                    }
                }
            }
        }
        Ok(Expr { name: name.to_ascii_lowercase(), args })
    }

    fn arg(&mut self) -> Result<(Option<String>, Arg), CliError> {
        self.skip_ws();
        let save = self.pos;
        let word = self.token();
        let key = if !word.is_empty() && word.starts_with(|c: char| c.is_ascii_alphabetic()) && self.eat('=') {
            Some(word.to_ascii_lowercase())
        } else {
            self.pos = save;
            None
        };
        self.skip_ws();
        let starts_number = self.rest().starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-' || c == '+');
        if starts_number {
            let tok = self.token();
            let v: f64 = tok.parse().map_err(|_| self.err(&format!("bad number '{tok}'")))?;
            Ok((key, Arg::Num(v)))
        } else {
            Ok((key, Arg::Expr(self.expr()?)))
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, CliError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Binds the arguments of `expr` to the parameter list.
pub struct Bound<'e> {
    family: &'e str,
    values: Vec<Option<&'e Arg>>,
    names: &'static [&'static str],
}

impl<'e> Bound<'e> {
    pub fn new(expr: &'e Expr, names: &'static [&'static str]) -> Result<Self, CliError> {
        let mut values: Vec<Option<&Arg>> = vec![None; names.len()];
        for (key, arg) in expr.args.iter().filter_map(|(k, a)| k.as_ref().map(|k| (k, a))) {
            let idx = names
                .iter()
                .position(|n| n == key)
                .ok_or_else(|| CliError::Config(format!("{}: unknown parameter '{key}' (expected {})", expr.name, names.join(", "))))?;
            if values[idx].is_some() {
                return Err(CliError::Config(format!("{}: parameter '{key}' given twice", expr.name)));
            }
            values[idx] = Some(arg);
        }
        // Positional arguments fill the remaining slots in order.
        for (_, arg) in expr.args.iter().filter(|(k, _)| k.is_none()) {
            let slot = values
                .iter()
                .position(Option::is_none)
                .ok_or_else(|| CliError::Config(format!("{}: too many arguments (expected {})", expr.name, names.join(", "))))?;
            values[slot] = Some(arg);
        }
        Ok(Self { family: &expr.name, values, names })
    }

    fn missing(&self, i: usize) -> CliError {
        CliError::Config(format!("{}: missing parameter '{}'", self.family, self.names[i]))
    }

    pub fn num(&self, i: usize, default: Option<f64>) -> Result<f64, CliError> {
        match self.values[i] {
            Some(Arg::Num(v)) => Ok(*v),
            Some(Arg::Expr(e)) => {
                Err(CliError::Config(format!("{}: parameter '{}' must be a number, got '{e}'", self.family, self.names[i])))
            }
            None => default.ok_or_else(|| self.missing(i)),
        }
    }

    pub fn expr(&self, i: usize, default: Option<&str>) -> Result<Expr, CliError> {
        match self.values[i] {
            Some(Arg::Expr(e)) => Ok(e.clone()),
            Some(Arg::Num(v)) => Err(CliError::Config(format!("{}: parameter '{}' must be a name, got {v}", self.family, self.names[i]))),
            None => match default {
                Some(d) => parse(d),
                None => Err(self.missing(i)),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_expressions() {
        let e = parse("copula(clayton, x = exp(2), weibull(shape=2, scale=1.5e0))").unwrap();
        let b = Bound::new(&e, &["copula", "x", "y"]).unwrap();
        assert_eq!(b.expr(2, None).unwrap().name, "weibull");
        let e = parse("Copula(clayton, exp(2), y = weibull(shape=2, scale=1.5e0))").unwrap();
        assert_eq!(e.name, "copula");
        assert_eq!(e.to_string(), "copula(clayton, exp(2), y=weibull(shape=2, scale=1.5))");
    }

    #[test]
    fn parses_bare_names_and_numbers() {
        assert_eq!(parse("linear").unwrap(), Expr { name: "linear".into(), args: vec![] });
        let e = parse("lomax-tte(2, -1e-3, .5)").unwrap();
        assert_eq!(e.args.iter().map(|(_, a)| a.clone()).collect::<Vec<_>>(), vec![Arg::Num(2.0), Arg::Num(-1e-3), Arg::Num(0.5)]);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "os(", "os(n=3,", "os(3) x", "(3)", "os(n=abc1.)", "os(1.2.3)"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn binds_arguments() {
        let e = parse("f(1, c=3)").unwrap();
        let b = Bound::new(&e, &["a", "b", "c"]).unwrap();
        assert_eq!(b.num(0, None).unwrap(), 1.0);
        assert_eq!(b.num(1, Some(7.0)).unwrap(), 7.0);
        assert_eq!(b.num(2, None).unwrap(), 3.0);
        assert!(Bound::new(&parse("f(d=1)").unwrap(), &["a"]).is_err());
        assert!(Bound::new(&parse("f(1, 2)").unwrap(), &["a"]).is_err());
        assert!(Bound::new(&parse("f(1, a=2)").unwrap(), &["a"]).is_err());
        assert!(Bound::new(&parse("f(a=1, a=2)").unwrap(), &["a", "b"]).is_err());
        let e = parse("f(b=2, 1)").unwrap();
        assert_eq!(Bound::new(&e, &["a", "b"]).unwrap().num(0, None).unwrap(), 1.0);
    }
}
