use super::Formula;

// Binding strength of the outermost constructor; higher binds tighter.
fn level(f: &Formula) -> u8 {
    use Formula as F;
    match f {
        F::PrefGeq(..) | F::PrefGt(..) => 0,
        F::Iff(..) => 1,
        F::Implies(..) => 2,
        F::Or(..) => 3,
        F::And(..) => 4,
        F::Not(_) | F::Box(_) | F::Diamond(_) => 5,
        _ => 6,
    }
}

fn child(out: &mut String, f: &Formula, min_level: u8) {
    if level(f) < min_level {
        out.push('(');
        write(out, f);
        out.push(')');
    } else {
        write(out, f);
    }
}

fn binary(out: &mut String, a: &Formula, op: &str, b: &Formula, left: u8, right: u8) {
    child(out, a, left);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    child(out, b, right);
}

fn write(out: &mut String, f: &Formula) {
    use Formula as F;
    match f {
        F::Atom(name) => out.push_str(name),
        F::MetaVar(name) => {
            out.push('?');
            out.push_str(name);
        }
        F::Top => out.push('T'),
        F::Bot => out.push('F'),
        F::Not(a) => {
            out.push('~');
            child(out, a, 5);
        }
        F::Box(a) => {
            out.push_str("[]");
            child(out, a, 5);
        }
        F::Diamond(a) => {
            out.push_str("<>");
            child(out, a, 5);
        }
        F::And(a, b) => binary(out, a, "&", b, 4, 5),
        F::Or(a, b) => binary(out, a, "|", b, 3, 4),
        F::Implies(a, b) => binary(out, a, "->", b, 3, 2),
        F::Iff(a, b) => binary(out, a, "<->", b, 1, 2),
        F::PrefGeq(a, b) => binary(out, a, ">=", b, 1, 1),
        F::PrefGt(a, b) => binary(out, a, ">", b, 1, 1),
        F::Oblig(c, a) | F::Perm(c, a) => {
            out.push_str(if matches!(f, F::Oblig(..)) { "O(" } else { "P(" });
            write(out, c);
            out.push_str(" / ");
            write(out, a);
            out.push(')');
        }
    }
}

/// Canonical printer; never simplifies, inserts only the parentheses the
/// grammar needs.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(&mut out, f);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconditional_obligation() {
        let f = Formula::oblig(Formula::atom("p"), Formula::Top);
        assert_eq!(render(&f), "O(p / T)");
    }

    #[test]
    fn strict_preference_top_level() {
        let f = Formula::pref_gt(Formula::atom("A"), Formula::atom("B"));
        assert_eq!(render(&f), "A > B");
    }

    #[test]
    fn double_negation_kept() {
        let f = Formula::not(Formula::not(Formula::atom("p")));
        assert_eq!(render(&f), "~~p");
    }

    #[test]
    fn parens_only_where_needed() {
        let p = || Formula::atom("p");
        let q = || Formula::atom("q");
        let f = Formula::and(Formula::or(p(), q()), Formula::not(Formula::or(p(), q())));
        assert_eq!(render(&f), "(p | q) & ~(p | q)");
        let g = Formula::implies(Formula::implies(p(), q()), p());
        assert_eq!(render(&g), "(p -> q) -> p");
        let h = Formula::and(Formula::pref_geq(p(), q()), q());
        assert_eq!(render(&h), "(p >= q) & q");
    }
}
