#ifndef PLATEAU_EXPR_HPP
#define PLATEAU_EXPR_HPP

#include "plateau/measured_set.hpp"

#include <memory>
#include <string>
#include <vector>

namespace plateau {

/// Small arithmetic expression grammar for integrands in scene files:
/// +, -, *, /, |.| (absolute value; |x| is the norm of the point), min,
/// max, numeric constants, point coordinates x0..x9, and tangent-frame
/// entries t<row><col> (row = frame vector, col = ambient coordinate).
class Expression {
public:
    static Expression parse(const std::string& text);

    double eval(const std::vector<double>& point, const TangentFrame* frame = nullptr) const;
    bool uses_frame() const;
    const std::string& source() const { return source_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

} // namespace plateau

#endif
