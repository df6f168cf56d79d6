#ifndef TRUNCMAP_FLOW_HPP
#define TRUNCMAP_FLOW_HPP

#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "truncmap/ipv4.hpp"
#include "truncmap/prefix_table.hpp"

namespace truncmap {

/// One unidirectional flow.
struct FlowRecord {
  std::int64_t start_time = 0;  // seconds since epoch
  Ipv4 src_addr = 0;
  Ipv4 dst_addr = 0;
  std::uint64_t packets = 0;
  std::uint64_t bytes = 0;

  friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

/// Parses `start_time,src,dst,packets,bytes`. `line_number` only feeds the
/// error message. Throws DataError naming the offending field.
FlowRecord parse_flow_csv(std::string_view line, std::size_t line_number = 0);

std::string format_flow_csv(const FlowRecord& flow);

/// Streams records from a flow CSV without buffering the whole trace.
class FlowCsvReader {
 public:
  explicit FlowCsvReader(std::istream& in) : in_(&in) {}

  /// Next record, or nullopt at end of input. Empty lines are skipped.
  std::optional<FlowRecord> next();
  std::size_t line_number() const { return line_number_; }

 private:
  std::istream* in_;
  std::string line_;
  std::size_t line_number_ = 0;
};

std::vector<FlowRecord> read_flows(std::istream& in);
std::vector<FlowRecord> read_flows(const std::string& path);
void for_each_flow(const std::string& path, const std::function<void(const FlowRecord&)>& sink);
void write_flows(std::ostream& out, std::span<const FlowRecord> flows);

enum class Direction { source, destination };

struct AddressView {
  Direction direction = Direction::source;
  Domain domain = Domain::internal;

  Ipv4 pick(const FlowRecord& flow) const {
    return direction == Direction::source ? flow.src_addr : flow.dst_addr;
  }
  /// Dense index 0..3, stable across runs.
  std::size_t index() const {
    return (direction == Direction::source ? 0 : 2) + (domain == Domain::internal ? 0 : 1);
  }

  friend bool operator==(const AddressView&, const AddressView&) = default;
};

inline constexpr std::array<AddressView, 4> kAllViews = {{
    {Direction::source, Domain::internal},
    {Direction::source, Domain::external},
    {Direction::destination, Domain::internal},
    {Direction::destination, Domain::external},
}};

/// "src_int", "src_ext", "dst_int", "dst_ext".
std::string to_string(AddressView view);
/// Accepts the names above with `_`, `-` or `x` as separator. Throws ConfigError.
AddressView parse_view(std::string_view text);

std::int64_t bin_index(std::int64_t timestamp, std::int64_t bin_seconds, std::int64_t epoch_start);

/// `timestamp` rounded down to a multiple of `bin_seconds`.
std::int64_t align_to_bin(std::int64_t timestamp, std::int64_t bin_seconds);

enum class Label { normal, attack, excluded };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

struct BinLabel {
  std::int64_t bin_index = 0;
  Label label = Label::normal;

  friend bool operator==(const BinLabel&, const BinLabel&) = default;
};

/// Reads `bin_index,label` lines. Duplicate bins are a DataError.
std::vector<BinLabel> read_labels(std::istream& in);
std::vector<BinLabel> read_labels(const std::string& path);
void write_labels(std::ostream& out, std::span<const BinLabel> labels);

/// Dense per-bin labels for bins [0, bin_count). Bins not mentioned are
/// excluded; labels at or beyond bin_count are ignored.
std::vector<Label> label_vector(std::span<const BinLabel> labels, std::size_t bin_count);

}  // namespace truncmap

#endif  // TRUNCMAP_FLOW_HPP
