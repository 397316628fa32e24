#include <cmath>
#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "ldp/validate.hpp"

namespace ldp {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

std::string decay_csv(const DecayEstimate& e) {
  std::string out =
      "n,hits,total,p_hat,rate,censored,rate_lower_bound,wilson_lo,wilson_hi,effective_c\n";
  for (const auto& r : e.rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.hits) + ',' + std::to_string(r.total) +
           ',' + fmt(r.p_hat) + ',' + (r.rate ? fmt(*r.rate) : "") + ',' +
           (r.censored ? "1" : "0") + ',' + fmt(r.rate_lower_bound) + ',' + fmt(r.wilson_lo) +
           ',' + fmt(r.wilson_hi) + ',' + fmt(r.effective_c) + '\n';
  }
  return out;
}

nlohmann::json to_json(const DecayEstimate& e) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : e.rows) {
    rows.push_back({{"n", r.n},
                    {"hits", r.hits},
                    {"total", r.total},
                    {"p_hat", r.p_hat},
                    {"rate", r.rate ? nlohmann::json(*r.rate) : nlohmann::json(nullptr)},
                    {"censored", r.censored},
                    {"rate_lower_bound", number_or_null(r.rate_lower_bound)},
                    {"wilson", {r.wilson_lo, r.wilson_hi}},
                    {"effective_c", r.effective_c}});
  }
  return {{"rows", rows},
          {"summary",
           {{"points", e.summary.points},
            {"intercept", e.summary.available() || e.summary.points == 1
                              ? number_or_null(e.summary.intercept)
                              : nlohmann::json(nullptr)},
            {"slope", e.summary.available() ? number_or_null(e.summary.slope) : nlohmann::json(nullptr)},
            {"intercept_se", number_or_null(e.summary.intercept_se)}}}};
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  return {{"model", std::string(to_string(cfg.model))},
          {"alphabet", cfg.nu.alphabet().symbols()},
          {"nu", std::vector<double>(cfg.nu.weights().begin(), cfg.nu.weights().end())},
          {"pi", std::vector<double>(cfg.pi.entries().begin(), cfg.pi.entries().end())},
          {"n_grid", cfg.n_grid},
          {"samples_per_n", cfg.samples_per_n},
          {"seed", cfg.seed},
          {"event", cfg.event.describe()},
          {"chunk", cfg.chunk}};
}

std::string git_blob_sha1(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("SHA-1 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned i = 0; i < len; ++i) {
    const unsigned char byte = digest[i];
    hex += kHex[byte >> 4];
    hex += kHex[byte & 0xf];
  }
  return hex;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  const std::string params = m.parameters.dump();
  nlohmann::json j = {{"subcommand", m.subcommand},
                      {"parameters", m.parameters},
                      {"seed", m.seed},
                      {"tool_version", m.tool_version},
                      {"outputs", m.outputs},
                      {"inputs_hash", git_blob_sha1(params)},
                      {"wall_clock_seconds", m.wall_clock_seconds}};
  write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace ldp
