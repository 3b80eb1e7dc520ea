#include "kssim/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "kssim/errors.hpp"

namespace kssim::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string trajectory_csv(const std::vector<DiagnosticsRow>& rows, const DiagnosticsSpec& spec) {
  std::string out = "t,mass,linf_gap,u_linf,min_u,min_v";
  for (double q : spec.q_list) out += ",gradv_L" + format_double(q);
  for (double r : spec.r_list) out += ",u_L" + format_double(r);
  out += '\n';
  for (const auto& row : rows) {
    out += format_double(row.t);
    for (double x : {row.mass, row.linf_gap, row.u_linf, row.min_u, row.min_v}) {
      out += ',';
      out += format_double(x);
    }
    for (double q : spec.q_list) {
      out += ',';
      out += format_double(row.gradv_norm(q));
    }
    for (double r : spec.r_list) {
      out += ',';
      out += format_double(row.u_norm(r));
    }
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("short write to " + path.string());
}

}  // namespace kssim::io
