use steinmann_web::{enumerate, render, stein_rank};

#[test]
fn operations_report_errors_as_text() {
    assert!(enumerate("(12|23)").unwrap_err().contains("duplicate"));
    assert!(stein_rank(0).is_err());
    assert!(render(4, "[[1,2],3").is_err());
}

#[test]
fn enumerate_lists_one_json_object_per_line() {
    let text = enumerate("(12|34)").unwrap();
    assert_eq!(text.lines().count(), 8);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["support"], "(12|34)");
    }
}

#[test]
fn plane_picture_has_three_lines() {
    let svg = render(3, "[[1,2],3]").unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<line ").count(), 3);
}
