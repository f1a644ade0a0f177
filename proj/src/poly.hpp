#ifndef HDM_SRC_POLY_HPP
#define HDM_SRC_POLY_HPP

#include <vector>

namespace hdm {

/// Dense bivariate polynomial, coefficient of x^i y^j at c[i * ny + j].
class Poly {
 public:
  Poly() : nx_(1), ny_(1), c_(1, 0.) {}
  Poly(int nx, int ny) : nx_(nx), ny_(ny), c_(nx * ny, 0.) {}

  static Poly mono(int i, int j, double a) {
    Poly p(i + 1, j + 1);
    p.at(i, j) = a;
    return p;
  }

  double& at(int i, int j) { return c_[i * ny_ + j]; }
  double at(int i, int j) const { return c_[i * ny_ + j]; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  Poly operator+(const Poly& o) const {
    Poly r(std::max(nx_, o.nx_), std::max(ny_, o.ny_));
    for (int i = 0; i < nx_; i++)
      for (int j = 0; j < ny_; j++) r.at(i, j) += at(i, j);
    for (int i = 0; i < o.nx_; i++)
      for (int j = 0; j < o.ny_; j++) r.at(i, j) += o.at(i, j);
    return r;
  }
  Poly operator-(const Poly& o) const { return *this + o * -1.; }
  Poly operator*(double s) const {
    Poly r = *this;
    for (double& v : r.c_) v *= s;
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r(nx_ + o.nx_ - 1, ny_ + o.ny_ - 1);
    for (int i = 0; i < nx_; i++)
      for (int j = 0; j < ny_; j++) {
        const double a = at(i, j);
        if (a == 0.) continue;
        for (int p = 0; p < o.nx_; p++)
          for (int q = 0; q < o.ny_; q++) r.at(i + p, j + q) += a * o.at(p, q);
      }
    return r;
  }

  Poly dx() const {
    if (nx_ == 1) return Poly();
    Poly r(nx_ - 1, ny_);
    for (int i = 1; i < nx_; i++)
      for (int j = 0; j < ny_; j++) r.at(i - 1, j) = i * at(i, j);
    return r;
  }
  Poly dy() const {
    if (ny_ == 1) return Poly();
    Poly r(nx_, ny_ - 1);
    for (int i = 0; i < nx_; i++)
      for (int j = 1; j < ny_; j++) r.at(i, j - 1) = j * at(i, j);
    return r;
  }
  Poly laplacian() const { return dx().dx() + dy().dy(); }

  double operator()(double x, double y) const {
    double vx = 0.;
    for (int i = nx_ - 1; i >= 0; i--) {
      double vy = 0.;
      for (int j = ny_ - 1; j >= 0; j--) vy = vy * y + at(i, j);
      vx = vx * x + vy;
    }
    return vx;
  }

 private:
  int nx_, ny_;
  std::vector<double> c_;
};

}  // namespace hdm

#endif
