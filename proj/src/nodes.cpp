#include "keli/nodes.hpp"
#include "keli/special.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

namespace keli {

namespace {
constexpr const char* kHeader = "# keli-node-table v1";
}

NodeValueTable build_node_table(int count, const PrecisionContext& ctx,
                                int threads) {
  if (count < 1) throw DomainError("node table needs count >= 1");
  NodeValueTable table;
  table.digits = ctx.total_digits();
  const mpfr_prec_t store_prec = bits_for_digits(table.digits);
  table.values.assign(count, BigReal(store_prec));
  parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t i) {
    const long j = static_cast<long>(i) + 1;
    const mpfr_prec_t work = ctx.bits() + 32;
    const BigReal s = BigReal(j, work) / (j + 1);
    const BigReal v = xi_log(s, ctx);
    BigReal out(store_prec);
    mpfr_set(out.get(), v.get(), MPFR_RNDN);
    table.values[i] = std::move(out);
  });
  return table;
}

void save_node_table(const NodeValueTable& table, const std::string& path) {
  std::ostringstream out;
  out << kHeader << '\n';
  out << "digits: " << table.digits << '\n';
  out << "count: " << table.count() << '\n';
  for (int j = 1; j <= table.count(); ++j)
    out << j << ' ' << to_string(table.values[j - 1]) << '\n';
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open for writing: " + path);
  f << out.str();
  if (!f.good()) throw Error("write failed: " + path);
}

NodeValueTable load_node_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line)) throw TruncationError("empty node table: " + path);
  if (line != kHeader) {
    if (line.rfind("# keli-node-table", 0) == 0)
      throw VersionError("unsupported node-table version: '" + line + "'");
    throw ParseError("missing node-table header in " + path);
  }

  auto read_field = [&](const std::string& key) -> long {
    if (!std::getline(f, line))
      throw TruncationError("node table ends before '" + key + "' field");
    const std::string prefix = key + ": ";
    if (line.rfind(prefix, 0) != 0)
      throw ParseError("expected '" + key + ":' line, got '" + line + "'");
    try {
      size_t used = 0;
      const long v = std::stol(line.substr(prefix.size()), &used);
      if (used != line.size() - prefix.size())
        throw ParseError("trailing junk in '" + key + "' field");
      return v;
    } catch (const std::invalid_argument&) {
      throw ParseError("unreadable '" + key + "' field: '" + line + "'");
    } catch (const std::out_of_range&) {
      throw ParseError("out-of-range '" + key + "' field: '" + line + "'");
    }
  };

  NodeValueTable table;
  const long digits = read_field("digits");
  const long count = read_field("count");
  if (digits < 1 || count < 1)
    throw ParseError("node table declares nonpositive digits or count");
  table.digits = static_cast<int>(digits);
  const mpfr_prec_t prec = bits_for_digits(table.digits);
  table.values.reserve(count);

  for (long j = 1; j <= count; ++j) {
    if (!std::getline(f, line))
      throw TruncationError("node table ends at row " + std::to_string(j - 1) +
                            " of " + std::to_string(count));
    const auto sp = line.find(' ');
    if (sp == std::string::npos)
      throw ParseError("malformed node row: '" + line + "'");
    long idx = 0;
    try {
      size_t used = 0;
      idx = std::stol(line.substr(0, sp), &used);
      if (used != sp) throw ParseError("bad index in row: '" + line + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad index in row: '" + line + "'");
    }
    if (idx != j)
      throw ParseError("node rows out of order: expected " + std::to_string(j) +
                       ", got " + std::to_string(idx));
    table.values.push_back(from_string(line.substr(sp + 1), prec));
  }
  while (std::getline(f, line))
    if (!line.empty())
      throw ParseError("unexpected content after the last node row");
  return table;
}

NodeValueTable round_table(const NodeValueTable& table, int digits) {
  if (digits > table.digits)
    throw DomainError("cannot widen a node table beyond its stored digits");
  if (digits == table.digits) return table;
  NodeValueTable out;
  out.digits = digits;
  out.values.reserve(table.values.size());
  for (const auto& v : table.values) out.values.push_back(round_to_digits(v, digits));
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  EVP_MD_CTX* c = EVP_MD_CTX_new();
  if (!c) throw Error("digest context allocation failed");
  EVP_DigestInit_ex(c, EVP_sha256(), nullptr);
  char buf[65536];
  while (in.good()) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(c, buf, static_cast<size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(c, md, &len);
  EVP_MD_CTX_free(c);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

}  // namespace keli
