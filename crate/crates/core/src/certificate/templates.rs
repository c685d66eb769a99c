//! The equation layout each certificate kind must carry.
//!
//! The layout is a function of the payload alone, so the verifier can tell
//! whether a certificate checks everything its kind demands. Groups listed
//! with an element tree are quantified over all elements; other groups over
//! their generators, which suffices because every quantified side is a
//! homomorphism in the bound variable.

use num_bigint::BigUint;

use super::model::{Binding, Family, GroupData, Kind, Payload};

pub type LayoutResult<T> = std::result::Result<T, String>;

struct Layout<'a> {
    payload: &'a Payload,
    out: Vec<Family>,
    source: &'static str,
}

impl<'a> Layout<'a> {
    fn new(payload: &'a Payload) -> Self {
        Layout {
            payload,
            out: Vec::new(),
            source: "",
        }
    }

    fn group(&self, name: &str) -> LayoutResult<&'a GroupData> {
        self.payload
            .groups
            .get(name)
            .ok_or_else(|| format!("payload has no group `{name}`"))
    }

    fn param(&self, name: &str) -> LayoutResult<usize> {
        let v = *self
            .payload
            .params
            .get(name)
            .ok_or_else(|| format!("payload has no parameter `{name}`"))?;
        usize::try_from(v).map_err(|_| format!("parameter `{name}` is negative"))
    }

    /// All elements when listed, generators otherwise.
    fn all(&self, var: &str, group: &str) -> LayoutResult<Vec<Binding>> {
        let g = self.group(group)?;
        Ok(vec![if g.elements.is_some() {
            Binding::new(var, group)
        } else {
            Binding::new(var, format!("gens:{group}"))
        }])
    }

    fn gens(&self, var: &str, group: &str) -> LayoutResult<Vec<Binding>> {
        self.group(group)?;
        Ok(vec![Binding::new(var, format!("gens:{group}"))])
    }

    fn eq(&mut self, name: String, over: Vec<Binding>, lhs: String, rhs: String) {
        self.out.push(Family::Eq {
            name,
            source: self.source.into(),
            over,
            lhs,
            rhs,
        });
    }

    fn member(&mut self, name: String, over: Vec<Binding>, expr: String, group: &str) {
        self.out.push(Family::Member {
            name,
            source: self.source.into(),
            over,
            expr,
            group: group.into(),
        });
    }

    fn embedding(&mut self, map: &str) {
        self.out.push(Family::Hom {
            name: format!("{map} is a homomorphism"),
            source: self.source.into(),
            map: map.into(),
        });
        self.out.push(Family::Injective {
            name: format!("{map} is injective"),
            source: self.source.into(),
            map: map.into(),
        });
    }

    fn order(&mut self, group: &str, value: String) {
        self.out.push(Family::Order {
            name: format!("order of {group}"),
            source: self.source.into(),
            group: group.into(),
            value,
        });
    }

    fn degree(&mut self, group: &str, value: usize) {
        self.out.push(Family::Degree {
            name: format!("degree of {group}"),
            source: self.source.into(),
            group: group.into(),
            value,
        });
    }

    /// Order families for every group carrying a claim.
    fn claimed_orders(&mut self) {
        self.source = "order-claim";
        for (name, g) in &self.payload.groups {
            if let Some(v) = &g.order {
                self.order(name, v.clone());
            }
        }
    }

    fn claim(&self, group: &str) -> LayoutResult<BigUint> {
        let g = self.group(group)?;
        let v = g.order.as_ref().ok_or_else(|| format!("group `{group}` carries no order claim"))?;
        v.parse().map_err(|_| format!("bad order claim `{v}` on `{group}`"))
    }
}

/// The families a certificate of `kind` with this payload must carry, in order.
pub fn expected(kind: Kind, payload: &Payload) -> LayoutResult<Vec<Family>> {
    let mut l = Layout::new(payload);
    match kind {
        Kind::Extension => extension(&mut l)?,
        Kind::Amalgam => amalgam(&mut l)?,
        Kind::EquivariantAmalgam => equivariant(&mut l)?,
        Kind::Commuting => {
            commuting(&mut l, "C")?;
        }
        Kind::Root => root(&mut l)?,
        Kind::HallTower => hall(&mut l)?,
        Kind::PowerTower => power(&mut l)?,
    }
    l.claimed_orders();
    Ok(l.out)
}

fn extension(l: &mut Layout) -> LayoutResult<()> {
    let count = l.param("count")?;
    l.group("H")?;
    l.source = "regular-representation";
    l.embedding("rho");
    for i in 1..=count {
        l.source = "partial-isomorphism";
        l.member(format!("K{i} is a subgroup of A"), l.gens("k", &format!("K{i}"))?, "k".into(), "A");
        l.embedding(&format!("psi{i}"));
        l.source = "hrushovski-conjugation";
        l.member(format!("h{i} lies in H"), vec![], format!("h{i}"), "H");
        l.eq(
            format!("conjugation by h{i} extends psi{i}"),
            l.all("k", &format!("K{i}"))?,
            format!("conj(rho(k), h{i})"),
            format!("rho(psi{i}(k))"),
        );
    }
    Ok(())
}

fn amalgam(l: &mut Layout) -> LayoutResult<()> {
    l.group("D")?;
    l.source = "amalgam-embedding";
    for m in ["f", "g", "r", "s"] {
        l.embedding(m);
    }
    l.source = "amalgam-square";
    l.eq("r after f equals s after g".into(), l.all("a", "A")?, "r(f(a))".into(), "s(g(a))".into());
    Ok(())
}

fn equivariant(l: &mut Layout) -> LayoutResult<()> {
    let n = l.param("n")?;
    l.source = "equivariant-embedding";
    for m in ["f", "g", "s", "t"] {
        l.embedding(m);
    }
    for i in 1..=n {
        l.source = "distinguished-automorphism";
        for m in ["alpha", "beta", "gamma"] {
            l.embedding(&format!("{m}{i}"));
        }
        l.eq(
            format!("f intertwines alpha{i} and beta{i}"),
            l.all("a", "A")?,
            format!("f(alpha{i}(a))"),
            format!("beta{i}(f(a))"),
        );
        l.eq(
            format!("g intertwines alpha{i} and gamma{i}"),
            l.all("a", "A")?,
            format!("g(alpha{i}(a))"),
            format!("gamma{i}(g(a))"),
        );
    }
    l.source = "equivariant-amalgam-square";
    l.eq("s after f equals t after g".into(), l.all("a", "A")?, "s(f(a))".into(), "t(g(a))".into());
    for i in 1..=n {
        l.source = "delta-conjugation";
        l.eq(
            format!("delta{i} after s equals s after beta{i}"),
            l.all("b", "B")?,
            format!("conj(s(b), delta{i}^-1)"),
            format!("s(beta{i}(b))"),
        );
        l.eq(
            format!("delta{i} after t equals t after gamma{i}"),
            l.all("c", "C")?,
            format!("conj(t(c), delta{i}^-1)"),
            format!("t(gamma{i}(c))"),
        );
        l.member(
            format!("delta{i} maps D into D"),
            l.all("d", "D")?,
            format!("conj(d, delta{i}^-1)"),
            "D",
        );
        l.member(
            format!("delta{i} is an automorphism of D"),
            l.all("d", "D")?,
            format!("conj(d, delta{i})"),
            "D",
        );
    }
    for g in ["W", "L", "M", "N"] {
        l.group(g)?;
    }
    Ok(())
}

/// Shared by commuting and root certificates; `c` names the group holding `f` and `g`.
fn commuting(l: &mut Layout, c: &str) -> LayoutResult<()> {
    l.source = "commuting-hypotheses";
    l.member("A is a subgroup of B".into(), l.gens("a", "A")?, "a".into(), "B");
    l.embedding("alpha");
    l.embedding("beta");
    l.member("beta preserves A".into(), l.gens("a", "A")?, "beta(a)".into(), "A");
    l.eq(
        "alpha and beta commute on A".into(),
        l.all("a", "A")?,
        "alpha(beta(a))".into(),
        "beta(alpha(a))".into(),
    );
    l.source = "commuting-extension";
    l.embedding("e");
    l.member(format!("f lies in {c}"), vec![], "f".into(), c);
    l.member(format!("g lies in {c}"), vec![], "g".into(), c);
    l.eq("f and g commute".into(), vec![], "f * g".into(), "g * f".into());
    l.eq(
        "conjugation by f extends alpha".into(),
        l.all("a", "A")?,
        "conj(e(a), f)".into(),
        "e(alpha(a))".into(),
    );
    l.eq(
        "conjugation by g extends beta".into(),
        l.all("b", "B")?,
        "conj(e(b), g)".into(),
        "e(beta(b))".into(),
    );
    Ok(())
}

fn root(l: &mut Layout) -> LayoutResult<()> {
    let n = l.param("n")?;
    if n == 0 {
        return Err("parameter `n` must be positive".into());
    }
    let m = l.group("D")?.degree;
    commuting(l, "D")?;
    l.source = "root-hypotheses";
    let mut nested = "a".to_string();
    for _ in 0..n {
        nested = format!("alpha({nested})");
    }
    l.eq(format!("alpha^{n} equals beta on A"), l.all("a", "A")?, nested, "beta(a)".into());

    l.source = "root-extension";
    l.embedding("phi");
    let twisted: Vec<String> = (0..n)
        .map(|j| match j {
            0 => "e(b)".to_string(),
            1 => "conj(e(b), f)".to_string(),
            _ => format!("conj(e(b), f^{j})"),
        })
        .collect();
    l.eq(
        "phi is the twisted diagonal".into(),
        l.all("b", "B")?,
        "phi(b)".into(),
        format!("blocks({})", twisted.join(", ")),
    );
    let unit = |j: usize, x: &str| {
        let parts: Vec<String> = (0..n)
            .map(|k| if k == j { x.to_string() } else { format!("id({m})") })
            .collect();
        format!("blocks({})", parts.join(", "))
    };
    for j in 0..n {
        l.member(
            format!("coordinate {} of D^{n} lies in C", j + 1),
            l.gens("d", "D")?,
            unit(j, "d"),
            "C",
        );
    }
    for j in 0..n {
        let rhs = if j == 0 {
            unit(n - 1, "conj(d, g)")
        } else {
            unit(j - 1, "d")
        };
        l.eq(
            format!("gamma shifts coordinate {}", j + 1),
            l.gens("d", "D")?,
            format!("conj({}, pi)", unit(j, "d")),
            rhs,
        );
    }
    l.member("gamma preserves C".into(), l.gens("z", "C")?, "conj(z, pi)".into(), "C");
    l.member("gamma^-1 preserves C".into(), l.gens("z", "C")?, "conj(z, pi^-1)".into(), "C");
    l.eq(
        "gamma after phi equals phi after alpha".into(),
        l.all("a", "A")?,
        "conj(phi(a), pi)".into(),
        "phi(alpha(a))".into(),
    );
    l.eq(
        format!("gamma^{n} after phi equals phi after beta"),
        l.all("b", "B")?,
        format!("conj(phi(b), pi^{n})"),
        "phi(beta(b))".into(),
    );
    let d = l.claim("D")?;
    l.order("C", d.pow(n as u32).to_string());
    Ok(())
}

fn hall(l: &mut Layout) -> LayoutResult<()> {
    let depth = l.param("depth")?;
    let pairs = l.param("pairs")?;
    let mut order = l.claim("H0")?;
    l.source = "symmetric-tower";
    for k in 0..depth {
        let deg = usize::try_from(&order).map_err(|_| format!("order of H{k} too large"))?;
        order = factorial(deg);
        l.degree(&format!("H{}", k + 1), deg);
        l.order(&format!("H{}", k + 1), order.to_string());
        l.embedding(&format!("rho{k}"));
    }
    if pairs > 0 {
        let s = l.param("stage")?;
        if s >= depth {
            return Err(format!("conjugacy stage {s} has no next stage"));
        }
        l.source = "stage-conjugacy";
        for j in 1..=pairs {
            l.member(format!("K{j} is a subgroup of H{s}"), l.gens("x", &format!("K{j}"))?, "x".into(), &format!("H{s}"));
            l.embedding(&format!("psi{j}"));
            l.member(format!("c{j} lies in H{}", s + 1), vec![], format!("c{j}"), &format!("H{}", s + 1));
            l.eq(
                format!("conjugation by c{j} extends psi{j}"),
                l.all("x", &format!("K{j}"))?,
                format!("conj(rho{s}(x), c{j})"),
                format!("rho{s}(psi{j}(x))"),
            );
        }
    }
    Ok(())
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

fn power(l: &mut Layout) -> LayoutResult<()> {
    let n = l.param("n")?;
    let depth = l.param("depth")?;
    for i in 0..=depth {
        l.source = "tower-stage";
        let a = format!("A{i}");
        l.member(format!("G{i} normalizes {a}"), l.gens("x", &a)?, format!("conj(x, G{i})"), &a);
        l.member(format!("G{i}^-1 normalizes {a}"), l.gens("x", &a)?, format!("conj(x, G{i}^-1)"), &a);
        l.eq(format!("F{i} is G{i}^{n}"), vec![], format!("F{i}"), format!("G{i}^{n}"));
        if i == 0 {
            continue;
        }
        let (p, b) = (format!("A{}", i - 1), format!("B{i}"));
        l.source = "tower-join";
        l.embedding(&format!("iota{i}"));
        l.member(format!("h{i} normalizes {b}"), l.gens("y", &b)?, format!("conj(y, h{i})"), &b);
        l.member(format!("h{i}^-1 normalizes {b}"), l.gens("y", &b)?, format!("conj(y, h{i}^-1)"), &b);
        l.eq(
            format!("h{i} extends G{}", i - 1),
            l.all("x", &p)?,
            format!("conj(iota{i}(x), h{i})"),
            format!("iota{i}(conj(x, G{}))", i - 1),
        );
        l.source = "tower-root";
        l.embedding(&format!("E{i}"));
        l.eq(
            format!("G{i} extends h{i} through E{i}"),
            l.all("y", &b)?,
            format!("conj(E{i}(y), G{i})"),
            format!("E{i}(conj(y, h{i}))"),
        );
        l.eq(
            format!("F{i} extends F{}", i - 1),
            l.all("x", &p)?,
            format!("conj(E{i}(iota{i}(x)), F{i})"),
            format!("E{i}(iota{i}(conj(x, F{})))", i - 1),
        );
    }
    Ok(())
}
