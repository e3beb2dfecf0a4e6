#include "mobopt/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mobopt/errors.hpp"

namespace mobopt::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("toml parse error at line " + std::to_string(line) + ": " + message);
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

/// Remove a trailing comment that is not inside a string literal.
std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"')
            in_string = !in_string;
        else if (s[i] == '#' && !in_string)
            return s.substr(0, i);
    }
    return s;
}

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<std::string> split_key_path(std::string_view s, int line) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : s) {
        if (c == '.') {
            if (current.empty())
                fail(line, "empty key segment");
            parts.push_back(current);
            current.clear();
        } else if (is_bare_key_char(c)) {
            current.push_back(c);
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            fail(line, std::string("unexpected character '") + c + "' in key");
        }
    }
    if (current.empty())
        fail(line, "empty key segment");
    parts.push_back(current);
    return parts;
}

Value parse_scalar(std::string_view text, int line);

Value parse_array(std::string_view text, int line) {
    // text excludes the surrounding brackets
    auto arr = std::make_shared<Array>();
    std::string current;
    bool in_string = false;
    int depth = 0;
    auto flush = [&] {
        const auto item = strip(current);
        if (!item.empty())
            arr->push_back(parse_scalar(item, line));
        current.clear();
    };
    for (char c : text) {
        if (c == '"')
            in_string = !in_string;
        if (!in_string && c == '[')
            ++depth;
        if (!in_string && c == ']')
            --depth;
        if (c == ',' && !in_string && depth == 0) {
            flush();
            continue;
        }
        current.push_back(c);
    }
    flush();
    return Value(Value::Storage(std::move(arr)));
}

Value parse_scalar(std::string_view text, int line) {
    text = strip(text);
    if (text.empty())
        fail(line, "empty value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"')
            fail(line, "unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < text.size(); ++i) {
            if (text[i] == '\\' && i + 2 < text.size()) {
                ++i;
                switch (text[i]) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                default: fail(line, "unsupported escape sequence");
                }
            } else {
                out.push_back(text[i]);
            }
        }
        return Value(Value::Storage(std::move(out)));
    }
    if (text.front() == '[') {
        if (text.back() != ']')
            fail(line, "unterminated array");
        return parse_array(text.substr(1, text.size() - 2), line);
    }
    if (text == "true")
        return Value(Value::Storage(true));
    if (text == "false")
        return Value(Value::Storage(false));

    const std::string token(text);
    const bool looks_float = token.find_first_of(".eE") != std::string::npos ||
                             token == "inf" || token == "-inf" || token == "nan";
    if (!looks_float) {
        std::int64_t iv = 0;
        const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), iv);
        if (ec == std::errc() && p == token.data() + token.size())
            return Value(Value::Storage(iv));
    }
    try {
        std::size_t used = 0;
        const double dv = std::stod(token, &used);
        if (used == token.size())
            return Value(Value::Storage(dv));
    } catch (...) {
    }
    fail(line, "cannot parse value '" + token + "'");
}

Table* descend(Table& root, const std::vector<std::string>& path, int line,
               std::size_t depth) {
    Table* table = &root;
    for (std::size_t i = 0; i < depth; ++i) {
        auto [it, inserted] = table->try_emplace(path[i]);
        Value& v = it->second;
        if (v.is_array()) {
            // array of tables: descend into its last element
            auto& arr = const_cast<Array&>(v.as_array());
            if (arr.empty() || !arr.back().is_table())
                fail(line, "key '" + path[i] + "' is not a table");
            table = &arr.back().as_table();
        } else if (v.is_table()) {
            table = &v.as_table();
        } else {
            fail(line, "key '" + path[i] + "' is not a table");
        }
    }
    return table;
}

} // namespace

const std::string& Value::as_string() const {
    if (!is_string())
        throw ConfigError("toml: expected string value");
    return std::get<std::string>(storage_);
}

double Value::as_number() const {
    if (is_float())
        return std::get<double>(storage_);
    if (is_integer())
        return static_cast<double>(std::get<std::int64_t>(storage_));
    throw ConfigError("toml: expected numeric value");
}

std::int64_t Value::as_integer() const {
    if (is_integer())
        return std::get<std::int64_t>(storage_);
    throw ConfigError("toml: expected integer value");
}

bool Value::as_bool() const {
    if (!is_bool())
        throw ConfigError("toml: expected boolean value");
    return std::get<bool>(storage_);
}

const Array& Value::as_array() const {
    if (!is_array())
        throw ConfigError("toml: expected array value");
    return *std::get<std::shared_ptr<Array>>(storage_);
}

const Table& Value::as_table() const {
    if (!is_table())
        throw ConfigError("toml: expected table value");
    return *std::get<std::shared_ptr<Table>>(storage_);
}

Table& Value::as_table() {
    if (!is_table())
        throw ConfigError("toml: expected table value");
    return *std::get<std::shared_ptr<Table>>(storage_);
}

Value parse(const std::string& text) {
    Value root;
    Table* current = &root.as_table();

    std::istringstream stream(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(stream, raw_line)) {
        ++line_no;
        const auto line = strip(strip_comment(raw_line));
        if (line.empty())
            continue;

        if (line.front() == '[') {
            const bool array_table = line.size() > 1 && line[1] == '[';
            const std::size_t open = array_table ? 2 : 1;
            const std::size_t close = line.find(array_table ? "]]" : "]", open);
            if (close == std::string::npos)
                fail(line_no, "unterminated table header");
            const auto path = split_key_path(line.substr(open, close - open), line_no);
            Table* parent = descend(root.as_table(), path, line_no, path.size() - 1);
            auto [it, inserted] = parent->try_emplace(path.back());
            Value& v = it->second;
            if (array_table) {
                if (inserted)
                    v = Value(Value::Storage(std::make_shared<Array>()));
                if (!v.is_array())
                    fail(line_no, "conflicting definition of '" + path.back() + "'");
                auto& arr = const_cast<Array&>(v.as_array());
                arr.emplace_back();
                current = &arr.back().as_table();
            } else {
                if (!v.is_table())
                    fail(line_no, "conflicting definition of '" + path.back() + "'");
                current = &v.as_table();
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(line_no, "expected key = value");
        const auto key_path = split_key_path(strip(line.substr(0, eq)), line_no);
        Table* parent = descend(*current, key_path, line_no, key_path.size() - 1);
        (*parent)[key_path.back()] = parse_scalar(line.substr(eq + 1), line_no);
    }
    return root;
}

Value parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

const Value* find(const Value& root, const std::string& dotted_path) {
    const Value* v = &root;
    std::string::size_type start = 0;
    while (start <= dotted_path.size()) {
        const auto dot = dotted_path.find('.', start);
        const std::string key = dotted_path.substr(
            start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!v->is_table())
            return nullptr;
        const auto& table = v->as_table();
        const auto it = table.find(key);
        if (it == table.end())
            return nullptr;
        v = &it->second;
        if (dot == std::string::npos)
            return v;
        start = dot + 1;
    }
    return nullptr;
}

} // namespace mobopt::toml
