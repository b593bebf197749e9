#ifndef TAUBER_EXPR_HPP
#define TAUBER_EXPR_HPP

#include <functional>
#include <memory>
#include <string>

namespace tauber::rules {

// Small arithmetic expression grammar over one free variable (named x or t):
//   + - * / ^  pow exp log sin cos abs min max sqrt  indicator(a,b)
// Constants: pi, e. indicator(a,b) is the indicator of [a,b] applied to the
// free variable. Parse failures throw SchemaError.
class Expr {
public:
    static Expr parse(const std::string& src);
    double eval(double x) const;
    const std::string& source() const { return src_; }

private:
    struct Node;
    std::shared_ptr<const Node> root_;
    std::string src_;
};

} // namespace tauber::rules

#endif
