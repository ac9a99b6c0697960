#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

namespace fislab::report {

std::string fmt(double v);

/// A named table of preformatted cells; the unit of everything the pipeline
/// writes. Charts are rendered from tables so the `report` subcommand can
/// rebuild them from a bundle directory alone.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::initializer_list<std::string> cells) {
    rows.emplace_back(cells);
  }
  std::size_t column_index(const std::string& column) const;  // throws on unknown
  double number(std::size_t row, std::size_t col) const;
  const std::string& cell(std::size_t row, std::size_t col) const {
    return rows[row][col];
  }

  std::string to_csv() const;
  nlohmann::ordered_json to_json() const;
  static Table from_csv(const std::string& name, const std::string& text);
};

// Chart emitters; each returns a self-contained SVG document.
std::string scatter_chart_svg(const Table& stability_long, std::size_t index_id);
std::string difference_chart_svg(const Table& differences, std::size_t index_id);
std::string adjacency_chart_svg(const Table& adjacency);
std::string box_chart_svg(const Table& importance_box, const std::string& experiment,
                          const std::string& title);
std::string heatmap_chart_svg(const Table& theory_surface);
std::string sufficiency_chart_svg(const Table& sufficiency);

}  // namespace fislab::report
