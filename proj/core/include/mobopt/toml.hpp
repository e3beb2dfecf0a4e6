#ifndef MOBOPT_TOML_HPP
#define MOBOPT_TOML_HPP

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace mobopt::toml {

/// Minimal TOML subset: tables, arrays of tables, and key = value pairs
/// where value is a string, number, boolean, or flat array. Covers run
/// configuration files; not a general TOML implementation.
class Value;
using Table = std::map<std::string, Value>;
using Array = std::vector<Value>;

class Value {
public:
    using Storage = std::variant<std::string, double, std::int64_t, bool,
                                 std::shared_ptr<Array>, std::shared_ptr<Table>>;

    Value() : storage_(std::make_shared<Table>()) {}
    explicit Value(Storage s) : storage_(std::move(s)) {}

    bool is_string() const { return std::holds_alternative<std::string>(storage_); }
    bool is_float() const { return std::holds_alternative<double>(storage_); }
    bool is_integer() const { return std::holds_alternative<std::int64_t>(storage_); }
    bool is_bool() const { return std::holds_alternative<bool>(storage_); }
    bool is_array() const { return std::holds_alternative<std::shared_ptr<Array>>(storage_); }
    bool is_table() const { return std::holds_alternative<std::shared_ptr<Table>>(storage_); }

    const std::string& as_string() const;
    double as_number() const; // integer or float
    std::int64_t as_integer() const;
    bool as_bool() const;
    const Array& as_array() const;
    const Table& as_table() const;
    Table& as_table();

private:
    Storage storage_;
};

/// Parse TOML text; throws ConfigError with a line number on bad input.
Value parse(const std::string& text);
Value parse_file(const std::string& path);

/// Dotted-path lookup ("solver.ars.horizon"); nullptr when absent.
const Value* find(const Value& root, const std::string& dotted_path);

} // namespace mobopt::toml

#endif
