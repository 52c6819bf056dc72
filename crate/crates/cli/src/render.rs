use orbifold_hurwitz::report::Report;

pub fn json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "expected", "actual", "status"])
        .expect("in-memory write");
    for it in &report.items {
        w.write_record([
            it.key.as_str(),
            &it.expected,
            &it.actual,
            it.status.as_str(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 input")
}

pub fn text(report: &Report) -> String {
    let mut s = report.command.to_string();
    for (k, v) in &report.params {
        s.push_str(&format!(" {k}={v}"));
    }
    s.push('\n');
    let width = report
        .items
        .iter()
        .map(|i| i.key.chars().count())
        .max()
        .unwrap_or(0);
    for it in &report.items {
        let pad = " ".repeat(width - it.key.chars().count());
        if it.expected.is_empty() {
            s.push_str(&format!("  {}{pad}  {}\n", it.key, it.actual));
        } else {
            s.push_str(&format!(
                "  {}{pad}  {}  expected {}  actual {}\n",
                it.key,
                it.status.as_str(),
                it.expected,
                it.actual
            ));
        }
    }
    s.push_str(&format!(
        "status: {} ({} ms)\n",
        report.status.as_str(),
        report.elapsed_ms
    ));
    s
}
