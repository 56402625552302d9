//! Problem files.
//!
//! ```text
//! char 0
//! bound 8
//! base x1 x2
//! base_ideal: x1^3 - x2^2      # optional, `;`-separated
//! vars Y1 Y2
//! ideal: Y1*Y2 - x1*x2
//! map: Y1 -> x1, Y2 -> x2
//! ```

use neron_core::algebra::Presentation;
use neron_core::neron::Problem;
use neron_core::{Field, MonomialOrder, Poly, Ring, RingRef};

use crate::text::{parse_poly, sections, Line, ParseResult, Section};

pub const PROBLEM_KEYS: &[&str] = &["char", "order", "bound", "base", "base_ideal", "vars", "ideal", "map"];

fn names(line: &Line) -> ParseResult<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (o, w) in line.words() {
        if !neron_core::poly::valid_var_name(w) {
            return line.err_at(o, format!("invalid variable name `{w}`"));
        }
        if out.iter().any(|n| n == w) {
            return line.err_at(o, format!("duplicate variable `{w}`"));
        }
        out.push(w.to_string());
    }
    Ok(out)
}

pub fn parse_order(line: &Line) -> ParseResult<MonomialOrder> {
    match line.value.as_str() {
        "degrevlex" => Ok(MonomialOrder::DegRevLex),
        "lex" => Ok(MonomialOrder::Lex),
        other => line.err_at(0, format!("expected `degrevlex` or `lex`, found `{other}`")),
    }
}

pub fn order_name(o: &MonomialOrder) -> Option<&'static str> {
    match o {
        MonomialOrder::DegRevLex => None,
        MonomialOrder::Lex => Some("lex"),
        MonomialOrder::Block(_) => None,
    }
}

/// The field, order and base variables declared in a header section.
pub struct Header {
    pub field: Field,
    pub order: MonomialOrder,
    pub base: Vec<String>,
}

pub fn header(sec: &Section) -> ParseResult<Header> {
    let c = sec.need("char")?;
    let field = Field::from_characteristic(c.single::<u64>()?).or_else(|e| c.err_at(0, e))?;
    let order = match sec.get("order")? {
        Some(l) => parse_order(l)?,
        None => MonomialOrder::DegRevLex,
    };
    let base = names(sec.need("base")?)?;
    Ok(Header { field, order, base })
}

/// An algebra over the header's base: `vars`, `ideal:` lines (appended in order).
pub fn algebra(sec: &Section, h: &Header) -> ParseResult<Presentation> {
    let vl = sec.need("vars")?;
    let vars = names(vl)?;
    for (o, w) in vl.words() {
        if h.base.iter().any(|b| b == w) {
            return vl.err_at(o, format!("`{w}` is already a base variable"));
        }
    }
    let mut all = h.base.clone();
    all.extend(vars.iter().cloned());
    let ring = Ring::new(h.field, &all, h.order.clone()).or_else(|e| vl.err(e.to_string()))?;
    let base_ideal = match sec.get("base_ideal")? {
        Some(l) => {
            let base = Ring::new(h.field, &h.base, h.order.clone()).or_else(|e| l.err(e.to_string()))?;
            l.polys(&base)?.iter().map(|p| p.map_to(&ring).unwrap()).collect()
        }
        None => Vec::new(),
    };
    let mut relations = Vec::new();
    for l in sec.all("ideal") {
        relations.extend(l.polys(&ring)?);
    }
    Presentation::new(ring, h.base.len(), base_ideal, relations).or_else(|e| sec.err(e.to_string()))
}

/// `map:` lines `Y -> poly, ...` over `target`; every name in `vars` exactly once.
pub fn maps(sec: &Section, vars: &[String], target: &RingRef) -> ParseResult<Vec<Poly>> {
    let mut out: Vec<Option<Poly>> = vec![None; vars.len()];
    let mut last: Option<&Line> = None;
    for l in sec.all("map") {
        last = Some(l);
        if l.value.trim().is_empty() {
            continue;
        }
        for (o, piece) in l.pieces(',') {
            let Some(arrow) = piece.find("->") else {
                let at = o + piece.len() - piece.trim_start().len();
                return l.err_at(at, "expected `->`");
            };
            let lhs = piece[..arrow].trim();
            let lhs_off = o + piece[..arrow].chars().take_while(|c| c.is_whitespace()).count();
            let Some(k) = vars.iter().position(|v| v == lhs) else {
                if lhs.is_empty() {
                    return l.err_at(lhs_off, "expected a variable before `->`");
                }
                return l.err_at(lhs_off, format!("unknown variable `{lhs}` on the left of `->`"));
            };
            if out[k].is_some() {
                return l.err_at(lhs_off, format!("`{lhs}` is mapped twice"));
            }
            let rhs_off = o + piece[..arrow + 2].chars().count();
            out[k] = Some(parse_poly(l, rhs_off, &piece[arrow + 2..], target)?);
        }
    }
    let missing: Vec<&str> = vars.iter().zip(&out).filter(|(_, p)| p.is_none()).map(|(v, _)| v.as_str()).collect();
    if !missing.is_empty() {
        let msg = format!("map arity: {} variables, no image for {}", vars.len(), missing.join(", "));
        return match last {
            Some(l) => l.err(msg),
            None => sec.err(msg),
        };
    }
    Ok(out.into_iter().map(Option::unwrap).collect())
}

/// Reads the problem from a header section; `bound` overrides the file's value.
pub fn problem_from(sec: &Section, bound: Option<u32>) -> ParseResult<Problem> {
    let h = header(sec)?;
    let b = algebra(sec, &h)?;
    let n = match (bound, sec.get("bound")?) {
        (Some(n), _) => n,
        (None, Some(l)) => l.single()?,
        (None, None) => return sec.err("missing `bound`"),
    };
    if n == 0 {
        let l = sec.need("bound")?;
        return l.err_at(0, "the bound must be positive");
    }
    let images = maps(sec, &b.algebra_names(), &b.base_ring())?;
    Problem::new(b, images, n).or_else(|e| sec.err(e.to_string()))
}

pub fn parse_problem(text: &str) -> ParseResult<Problem> {
    parse_problem_with(text, None)
}

pub fn parse_problem_with(text: &str, bound: Option<u32>) -> ParseResult<Problem> {
    let secs = sections(text)?;
    if let Some(s) = secs.get(1) {
        return s.err(format!("unexpected section [{}] in a problem file", s.name));
    }
    secs[0].only(PROBLEM_KEYS)?;
    problem_from(&secs[0], bound)
}

pub fn join(ps: &[Poly]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ")
}

pub fn map_line(vars: &[String], images: &[Poly]) -> String {
    let parts: Vec<String> = vars.iter().zip(images).map(|(v, p)| format!("{v} -> {p}")).collect();
    format!("map: {}\n", parts.join(", "))
}

pub fn print_problem(p: &Problem) -> String {
    let b = &p.algebra;
    let mut out = String::new();
    out.push_str(&format!("char {}\n", b.ring.field().characteristic()));
    if let Some(o) = order_name(b.ring.order()) {
        out.push_str(&format!("order {o}\n"));
    }
    out.push_str(&format!("bound {}\n", p.bound));
    out.push_str(&format!("base {}\n", b.base_names().join(" ")));
    if !b.base_ideal.is_empty() {
        out.push_str(&format!("base_ideal: {}\n", join(&b.base_ideal_in_base())));
    }
    out.push_str(&format!("vars {}\n", b.algebra_names().join(" ")));
    out.push_str(&format!("ideal: {}\n", join(&b.relations)));
    out.push_str(&map_line(&b.algebra_names(), &p.approx));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "char 0\nbound 8\nbase x1 x2\nvars Y1 Y2\nideal: -x1*x2 + Y1*Y2\nmap: Y1 -> x1, Y2 -> x2\n";

    #[test]
    fn worked_file_round_trips() {
        let p = parse_problem(WORKED).unwrap();
        assert_eq!(print_problem(&p), WORKED);
        assert_eq!(parse_problem(&print_problem(&p)).unwrap(), p);
    }

    #[test]
    fn smooth_file_has_empty_base_ideal() {
        let p = parse_problem("char 0\nbound 4\nbase x1\nvars Y\nideal: Y - x1\nmap: Y -> x1\n").unwrap();
        assert!(p.algebra.base_ideal.is_empty());
        assert_eq!(p.algebra.relations.len(), 1);
    }

    #[test]
    fn undeclared_variable_in_map_is_named() {
        let e = parse_problem("char 0\nbound 4\nbase x1 x2\nvars Y1\nideal: Y1\nmap: Y1 -> x3\n").unwrap_err();
        assert_eq!((e.line, e.col), (6, 12));
        assert!(e.msg.contains("x3"), "{e}");
    }

    #[test]
    fn positioned_errors() {
        let e = parse_problem("char 0\nbound 4\nbase x\nvars Y\nideal: Y^2 - x*(\nmap: Y -> 0\n").unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.msg.contains("unexpected end"), "{e}");
        let e = parse_problem("char 0\nbound 4\nbase x\nvars Y Z\nideal: Y\nmap: Y -> 0\n").unwrap_err();
        assert!(e.msg.contains("map arity"), "{e}");
        let e = parse_problem("char 0\nbound 4\nbase x\nvars Y\nideal: Y\nmap: Y  x\n").unwrap_err();
        assert_eq!((e.line, e.col, e.msg.as_str()), (6, 6, "expected `->`"));
        let e = parse_problem("char 6\nbound 4\nbase x\nvars Y\nideal: Y\nmap: Y -> 0\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn whitespace_comments_and_split_lines() {
        let p = parse_problem(
            "# a comment\n  char   0\nbound 3\nbase x\nvars  Y Z\nideal: Y - x ;Z\nideal: Y*Z\nmap: Z -> 0\nmap:Y->x\n",
        )
        .unwrap();
        assert_eq!(p.algebra.relations.len(), 3);
        assert_eq!(print_problem(&p), "char 0\nbound 3\nbase x\nvars Y Z\nideal: -x + Y; Z; Y*Z\nmap: Y -> x, Z -> 0\n");
    }
}
