// Copyright 2026 The uqeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uqeval/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uqeval
{

namespace
{

using nlohmann::json;

json tag_to_json(const ShiftTag & tag)
{
  json j;
  j["partition"] = to_string(tag.partition);
  j["meta"] = tag.meta;
  return j;
}

ShiftTag tag_from_json(const json & j)
{
  ShiftTag tag;
  tag.partition = parse_partition(j.at("partition").get<std::string>());
  if (j.contains("meta")) {
    tag.meta = j.at("meta").get<std::vector<std::string>>();
  }
  return tag;
}

json points_to_json(const std::vector<Point2> & points)
{
  json j = json::array();
  for (const Point2 & p : points) {
    j.push_back(json::array({p.x, p.y}));
  }
  return j;
}

std::vector<Point2> points_from_json(const json & j)
{
  std::vector<Point2> points;
  points.reserve(j.size());
  for (const json & p : j) {
    if (!p.is_array() || p.size() != 2) {
      throw ParseError("expected [x, y] state");
    }
    points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  return points;
}

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const RegressionRecord & record)
{
  json members = json::array();
  for (const GaussianMember & m : record.members) {
    members.push_back({{"mean", m.mean}, {"var", m.variance}});
  }
  json j;
  j["task"] = "regression";
  j["id"] = record.id;
  j["members"] = std::move(members);
  j["target"] = record.target;
  j["tag"] = tag_to_json(record.tag);
  return j;
}

json to_json(const TrajectoryRecord & record)
{
  json predictions = json::array();
  for (const Trajectory & p : record.predictions) {
    predictions.push_back(points_to_json(p.states));
  }
  json validity = json::array();
  for (const bool b : record.ground_truth.validity) {
    validity.push_back(b);
  }
  json j;
  j["task"] = "trajectory";
  j["id"] = record.id;
  j["predictions"] = std::move(predictions);
  j["confidences"] = record.confidences;
  j["request_uncertainty"] = record.request_uncertainty;
  j["ground_truth"] = {
    {"states", points_to_json(record.ground_truth.states)}, {"validity", std::move(validity)}};
  j["tag"] = tag_to_json(record.tag);
  return j;
}

json to_json(const TranslationRecord & record)
{
  json j;
  j["task"] = "translation";
  j["id"] = record.id;
  j["hypotheses"] = record.hypotheses;
  j["weights"] = record.weights;
  j["reference"] = record.reference;
  j["tag"] = tag_to_json(record.tag);
  return j;
}

RegressionRecord regression_from_json(const json & j)
{
  RegressionRecord r;
  r.id = j.at("id").get<std::string>();
  for (const json & m : j.at("members")) {
    r.members.push_back({m.at("mean").get<double>(), m.at("var").get<double>()});
  }
  r.target = j.at("target").get<double>();
  r.tag = tag_from_json(j.at("tag"));
  return r;
}

TrajectoryRecord trajectory_from_json(const json & j)
{
  TrajectoryRecord r;
  r.id = j.at("id").get<std::string>();
  for (const json & p : j.at("predictions")) {
    r.predictions.emplace_back(points_from_json(p));
  }
  r.confidences = j.at("confidences").get<std::vector<double>>();
  r.request_uncertainty = j.at("request_uncertainty").get<double>();
  const json & gt = j.at("ground_truth");
  std::vector<Point2> states = points_from_json(gt.at("states"));
  std::vector<bool> validity(states.size(), true);
  if (gt.contains("validity")) {
    const json & v = gt.at("validity");
    validity.assign(v.size(), true);
    for (std::size_t i = 0; i < v.size(); ++i) {
      validity[i] = v.at(i).get<bool>();
    }
  }
  r.ground_truth = Trajectory(std::move(states), std::move(validity));
  r.tag = tag_from_json(j.at("tag"));
  return r;
}

TranslationRecord translation_from_json(const json & j)
{
  TranslationRecord r;
  r.id = j.at("id").get<std::string>();
  r.hypotheses = j.at("hypotheses").get<std::vector<Tokens>>();
  r.weights = j.at("weights").get<std::vector<double>>();
  r.reference = j.at("reference").get<Tokens>();
  r.tag = tag_from_json(j.at("tag"));
  return r;
}

namespace
{

/// Parses one JSONL line; `line` is 1-based and only used for error context.
void parse_line_into(const std::string & text, std::size_t line, Dataset & out, bool & first)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception & e) {
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
  try {
    const Task task = parse_task(j.at("task").get<std::string>());
    if (first) {
      out.task = task;
      first = false;
    } else if (task != out.task) {
      throw ParseError(
        std::string("task \"") + to_string(task) + "\" differs from the file's \"" +
        to_string(out.task) + "\"");
    }
    switch (task) {
      case Task::regression:
        out.regression.push_back(regression_from_json(j));
        break;
      case Task::trajectory:
        out.trajectory.push_back(trajectory_from_json(j));
        break;
      case Task::translation:
        out.translation.push_back(translation_from_json(j));
        break;
    }
  } catch (const json::exception & e) {
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  } catch (const ParseError & e) {
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace

Dataset read_jsonl(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  Dataset out;
  bool first = true;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) {
      continue;
    }
    parse_line_into(text, line, out, first);
  }
  return out;
}

std::string to_jsonl(const Dataset & dataset)
{
  std::string out;
  const auto append = [&out](const json & j) {
    out += j.dump();
    out += '\n';
  };
  switch (dataset.task) {
    case Task::regression:
      for (const RegressionRecord & r : dataset.regression) append(to_json(r));
      break;
    case Task::trajectory:
      for (const TrajectoryRecord & r : dataset.trajectory) append(to_json(r));
      break;
    case Task::translation:
      for (const TranslationRecord & r : dataset.translation) append(to_json(r));
      break;
  }
  return out;
}

void write_jsonl(const Dataset & dataset, const std::filesystem::path & path)
{
  write_text_file(path, to_jsonl(dataset));
}

ValidationSummary validate_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  ValidationSummary summary;
  std::string text;
  std::size_t line = 0;
  bool first = true;
  Task task = Task::regression;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) {
      continue;
    }
    ++summary.records;
    // Each line is parsed and validated on its own so one bad record does not
    // hide problems further down.
    Dataset one;
    bool one_first = true;
    try {
      parse_line_into(text, line, one, one_first);
      if (first) {
        task = one.task;
        first = false;
      } else if (one.task != task) {
        throw ParseError(
          std::string("line ") + std::to_string(line) + ": task \"" + to_string(one.task) +
          "\" differs from the file's \"" + to_string(task) + "\"");
      }
      switch (one.task) {
        case Task::regression:
          validate_regression_record(one.regression.front());
          break;
        case Task::trajectory:
          if (validate_trajectory_record(one.trajectory.front()) == RecordStatus::skip) {
            ++summary.skipped;
          }
          break;
        case Task::translation:
          validate_translation_record(one.translation.front());
          break;
      }
    } catch (const Error & e) {
      summary.issues.push_back({line, e.what()});
    }
  }
  return summary;
}

void write_curve_csv(const RetentionCurve & curve, const std::filesystem::path & path)
{
  std::string out = "retention,value\n";
  for (const CurvePoint & p : curve.points) {
    out += format_double(p.retention);
    out += ',';
    out += format_double(p.value);
    out += '\n';
  }
  write_text_file(path, out);
}

RetentionCurve read_curve_csv(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  RetentionCurve curve;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (line == 1) {
      if (text != "retention,value") {
        throw ParseError(path.string() + ": missing retention,value header");
      }
      continue;
    }
    if (text.empty()) {
      continue;
    }
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos) {
      throw ParseError(path.string() + " line " + std::to_string(line) + ": expected two columns");
    }
    try {
      curve.points.push_back(
        {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))});
    } catch (const std::exception &) {
      throw ParseError(path.string() + " line " + std::to_string(line) + ": bad number");
    }
  }
  if (curve.points.size() >= 2) {
    curve.auc = r_auc(curve);
  }
  return curve;
}

namespace
{

struct PlotBox
{
  double left = 70.0;
  double right = 690.0;
  double top = 40.0;
  double bottom = 425.0;
  double width = 720.0;
  double height = 480.0;
};

void append_polyline(
  std::string & svg, const RetentionCurve & curve, const PlotBox & box, double ymax,
  const char * color, const char * dash)
{
  const RetentionCurve plotted = subsample_curve(curve, 1001);
  std::string points;
  char buf[64];
  for (const CurvePoint & p : plotted.points) {
    const double x = box.left + p.retention * (box.right - box.left);
    const double y = box.bottom - (p.value / ymax) * (box.bottom - box.top);
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x, y);
    points += buf;
  }
  svg += "  <polyline fill=\"none\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.8\"";
  if (dash != nullptr) {
    svg += " stroke-dasharray=\"";
    svg += dash;
    svg += "\"";
  }
  svg += " points=\"" + points + "\"/>\n";
}

}  // namespace

void write_curve_svg(
  const std::filesystem::path & path, const std::string & title, const std::string & y_label,
  const RetentionCurve & model, const RetentionCurve * random_baseline,
  const RetentionCurve * optimal_baseline)
{
  const PlotBox box;
  double ymax = 1e-12;
  const auto scan = [&ymax](const RetentionCurve * c) {
    if (c == nullptr) return;
    for (const CurvePoint & p : c->points) {
      ymax = std::max(ymax, p.value);
    }
  };
  scan(&model);
  scan(random_baseline);
  scan(optimal_baseline);
  ymax *= 1.05;

  char buf[160];
  std::string svg;
  std::snprintf(
    buf, sizeof(buf),
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
    "viewBox=\"0 0 %.0f %.0f\">\n",
    box.width, box.height, box.width, box.height);
  svg += buf;
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes and grid.
  for (int i = 0; i <= 5; ++i) {
    const double frac = static_cast<double>(i) / 5.0;
    const double x = box.left + frac * (box.right - box.left);
    const double y = box.bottom - frac * (box.bottom - box.top);
    std::snprintf(
      buf, sizeof(buf),
      "  <line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#dddddd\"/>\n", x,
      box.top, x, box.bottom);
    svg += buf;
    std::snprintf(
      buf, sizeof(buf),
      "  <line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#dddddd\"/>\n", box.left,
      y, box.right, y);
    svg += buf;
    std::snprintf(
      buf, sizeof(buf),
      "  <text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\">%.2g</text>\n",
      x, box.bottom + 18.0, frac);
    svg += buf;
    std::snprintf(
      buf, sizeof(buf),
      "  <text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"end\">%.3g</text>\n",
      box.left - 6.0, y + 4.0, frac * ymax);
    svg += buf;
  }
  std::snprintf(
    buf, sizeof(buf),
    "  <line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", box.left,
    box.bottom, box.right, box.bottom);
  svg += buf;
  std::snprintf(
    buf, sizeof(buf),
    "  <line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", box.left,
    box.top, box.left, box.bottom);
  svg += buf;

  append_polyline(svg, model, box, ymax, "#1f77b4", nullptr);
  if (random_baseline != nullptr) {
    append_polyline(svg, *random_baseline, box, ymax, "#7f7f7f", "6 4");
  }
  if (optimal_baseline != nullptr) {
    append_polyline(svg, *optimal_baseline, box, ymax, "#2ca02c", "2 3");
  }

  // Title and axis labels.
  std::snprintf(
    buf, sizeof(buf),
    "  <text x=\"%.1f\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
    "text-anchor=\"middle\">",
    0.5 * (box.left + box.right));
  svg += buf;
  svg += title + "</text>\n";
  std::snprintf(
    buf, sizeof(buf),
    "  <text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" "
    "text-anchor=\"middle\">retention fraction</text>\n",
    0.5 * (box.left + box.right), box.height - 12.0);
  svg += buf;
  std::snprintf(
    buf, sizeof(buf),
    "  <text x=\"18\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" "
    "text-anchor=\"middle\" transform=\"rotate(-90 18 %.1f)\">",
    0.5 * (box.top + box.bottom), 0.5 * (box.top + box.bottom));
  svg += buf;
  svg += y_label + "</text>\n";

  // Legend.
  const double lx = box.right - 150.0;
  double ly = box.top + 16.0;
  const auto legend = [&](const char * color, const char * dash, const char * name) {
    std::snprintf(
      buf, sizeof(buf), "  <line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\"",
      lx, ly - 4.0, lx + 26.0, ly - 4.0, color);
    svg += buf;
    if (dash != nullptr) {
      svg += " stroke-dasharray=\"";
      svg += dash;
      svg += "\"";
    }
    svg += " stroke-width=\"1.8\"/>\n";
    std::snprintf(
      buf, sizeof(buf),
      "  <text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
      lx + 32.0, ly, name);
    svg += buf;
    ly += 18.0;
  };
  legend("#1f77b4", nullptr, "model");
  if (random_baseline != nullptr) {
    legend("#7f7f7f", "6 4", "random");
  }
  if (optimal_baseline != nullptr) {
    legend("#2ca02c", "2 3", "optimal");
  }
  svg += "</svg>\n";
  write_text_file(path, svg);
}

ScoreMatrix read_score_matrix_csv(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  ScoreMatrix m;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) {
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) {
          ++used;
        }
        if (used != cell.size()) {
          throw ParseError("trailing characters");
        }
        row.push_back(v);
      } catch (const std::exception &) {
        throw ParseError(
          path.string() + " line " + std::to_string(line) + ": bad log-probability \"" + cell +
          "\"");
      }
    }
    if (row.empty()) {
      continue;
    }
    if (m.models == 0) {
      m.models = row.size();
    } else if (row.size() != m.models) {
      throw ParseError(
        path.string() + " line " + std::to_string(line) + ": expected " +
        std::to_string(m.models) + " columns, got " + std::to_string(row.size()));
    }
    m.logp.insert(m.logp.end(), row.begin(), row.end());
    ++m.candidates;
  }
  if (m.candidates == 0) {
    throw ParseError(path.string() + ": empty score matrix");
  }
  return m;
}

void write_text_file(const std::filesystem::path & path, const std::string & content)
{
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw IoError("failed while writing " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace uqeval
