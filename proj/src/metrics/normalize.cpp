#include "metaglyph/metrics/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

namespace metaglyph::metrics {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) begin++;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) end--;
    return s.substr(begin, end - begin);
}

} // namespace

util::Json normalize(const util::Json& value, forge::TaskFamily family) {
    if (value.is_string()) return trim(value.get<std::string>());
    if (value.is_object()) {
        util::Json out = util::Json::object(); // keys sort on insertion
        for (const auto& [key, member] : value.items()) out[key] = normalize(member, family);
        return out;
    }
    if (value.is_array()) {
        std::vector<util::Json> elements;
        elements.reserve(value.size());
        for (const auto& element : value) elements.push_back(normalize(element, family));
        if (family != forge::TaskFamily::ConditionalTransformation) {
            std::sort(elements.begin(), elements.end(),
                      [](const util::Json& a, const util::Json& b) {
                          return util::to_line(a) < util::to_line(b);
                      });
        }
        util::Json out = util::Json::array();
        for (auto& element : elements) out.push_back(std::move(element));
        return out;
    }
    return value; // numbers, booleans, null: no coercion
}

} // namespace metaglyph::metrics
