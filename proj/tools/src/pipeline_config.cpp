#include "dialkit/cli/pipeline_config.hpp"

#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dialkit/error.hpp"
#include "dialkit/manifest.hpp"
#include "dialkit/paths.hpp"
#include "dialkit/tsv.hpp"

namespace dialkit::cli {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string trim(std::string v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if ((v[i] == ';' || v[i] == '#') && (v[i - 1] == ' ' || v[i - 1] == '\t')) {
      v.resize(i);
      break;
    }
  }
  const auto a = v.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  return v.substr(a, v.find_last_not_of(" \t") - a + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(const fs::path& origin, const std::string& what) {
  throw Error(ErrorCode::Config, origin.string() + ": " + what);
}

double positive(const fs::path& origin, const std::string& key, const std::string& v) {
  auto d = io::parse_number(v);
  if (!d || !(*d > 0)) fail(origin, key + ": expected a positive number");
  return *d;
}

}  // namespace

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.detail());
  }
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(path, e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  const fs::path base = path.parent_path();

  PipelineConfig c;
  c.source = path;
  std::vector<fs::path> dataset_paths;
  fs::path buckwalter, punctuation, dialects, geo, themes;
  bool have_workspace = false;

  for (const auto& [section, body] : tree) {
    for (const auto& [key, node] : body) {
      const std::string v = trim(node.data());
      const std::string where = "[" + section + "] " + key;
      if (section == "pipeline") {
        if (key == "workspace") {
          c.workspace = base / v;
          have_workspace = true;
        } else if (key == "seed") {
          auto s = io::parse_integer(v);
          if (!s || *s < 0) fail(path, where + ": expected a non-negative integer");
          c.seed = static_cast<std::uint64_t>(*s);
        } else if (key == "jobs") {
          auto j = io::parse_integer(v);
          if (!j || *j < 1 || *j > 1024) fail(path, where + ": expected 1..1024");
          c.jobs = static_cast<unsigned>(*j);
        } else if (key == "datasets") {
          for (const auto& d : split_list(v)) dataset_paths.push_back(base / d);
        } else {
          fail(path, "unknown key " + where);
        }
      } else if (section == "tables") {
        const fs::path p = base / v;
        if (key == "buckwalter") buckwalter = p;
        else if (key == "punctuation") punctuation = p;
        else if (key == "dialects") dialects = p;
        else if (key == "geo") geo = p;
        else if (key == "themes") themes = p;
        else fail(path, "unknown key " + where);
      } else if (section == "splits") {
        if (key == "adapt_hours") c.targets.adapt_hours = positive(path, where, v);
        else if (key == "dev_hours") c.targets.dev_hours = positive(path, where, v);
        else if (key == "test_hours") c.targets.test_hours = positive(path, where, v);
        else if (key == "min_pool_hours") c.targets.min_pool_hours = positive(path, where, v);
        else fail(path, "unknown key " + where);
      } else if (section == "profile") {
        if (key == "scores") {
          for (const auto& s : split_list(v)) c.score_files.push_back(base / s);
        } else {
          fail(path, "unknown key " + where);
        }
      } else if (section == "score") {
        if (key == "group_key") {
          auto g = scoring::parse_group_key(v);
          if (!g) fail(path, where + ": expected dialect, country, locality or dataset");
          c.group_key = *g;
        } else if (key == "include_empty_references") {
          if (v != "true" && v != "false") fail(path, where + ": expected true or false");
          c.include_empty_references = v == "true";
        } else {
          fail(path, "unknown key " + where);
        }
      } else {
        fail(path, "unknown section [" + section + "]");
      }
    }
  }
  if (!have_workspace) fail(path, "[pipeline] workspace is required");
  if (dataset_paths.empty()) fail(path, "[pipeline] datasets is required");

  auto load_table = [&](const fs::path& p, auto&& loader, auto&& fallback) {
    if (p.empty()) return fallback();
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) fail(path, "table not found: " + p.string());
    try {
      return loader(p);
    } catch (const Error& e) {
      fail(path, e.detail());
    }
  };
  using corpus::DialectRegistry;
  c.registry = load_table(
      dialects, [](const fs::path& p) { return std::make_shared<const DialectRegistry>(DialectRegistry::load(p)); },
      [] { return std::make_shared<const DialectRegistry>(DialectRegistry::standard()); });
  c.geo = load_table(
      geo, [&](const fs::path& p) { return std::make_shared<const corpus::GeoLookupTable>(corpus::GeoLookupTable::load(p, *c.registry)); },
      [&] {
        return std::make_shared<const corpus::GeoLookupTable>(
            corpus::GeoLookupTable::load(default_data_dir() / "geo.tsv", *c.registry));
      });
  c.themes = load_table(
      themes, [](const fs::path& p) { return std::make_shared<const corpus::DomainThemeTable>(corpus::DomainThemeTable::load(p)); },
      [] { return std::make_shared<const corpus::DomainThemeTable>(corpus::DomainThemeTable::standard()); });
  auto bw = load_table(
      buckwalter, [](const fs::path& p) { return text::BuckwalterTable::load(p); },
      [] { return text::BuckwalterTable::standard(); });
  auto punct = load_table(
      punctuation, [](const fs::path& p) { return text::PunctuationSet::load(p); },
      [] { return text::PunctuationSet::standard(); });
  c.normalizer = std::make_shared<const text::Normalizer>(std::move(bw), std::move(punct));

  std::string digest_input = text;
  for (const auto& p : dataset_paths) {
    c.datasets.push_back(corpus::DatasetConfig::load(p));
    digest_input += '\n';
    digest_input += c.datasets.back().digest;
  }
  std::set<std::string> ids;
  for (const auto& d : c.datasets) {
    if (!ids.insert(d.dataset_id).second) fail(path, "dataset id '" + d.dataset_id + "' used twice");
  }
  c.digest = corpus::digest_hex(digest_input);
  return c;
}

}  // namespace dialkit::cli
