#include "condense/presets.hpp"

#include <array>
#include <utility>

namespace condense {

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 17> kPresets{{
    {"fig2a", R"cfg(# Two-layer 5-50-1 network on sum_k 3.5 sin(5 x_k + 1), tanh, analyzed at epoch 100.

[experiment]
name = fig2a
figure = 2(a)
caption = n=80, d=5, m=50, d_out=1, var=0.005^2, lr=1e-3, activation tanh, epoch 100
seed = 1
out_dir = runs/fig2a

[data]
source = synthetic
target = sine_sum
dim = 5
n = 80
amplitude = 3.5
frequency = 5
phase = 1
lo = -4
hi = 2

[network]
hidden = 50
activations = tanh
init_std = 0.005

[optimizer]
kind = adam
lr = 1e-3

[run]
max_epochs = 100
snapshot_epochs = 20, 40, 60, 80, 100

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case1
)cfg"},
    {"fig2b", R"cfg(# Two-layer 5-50-1 network on sum_k 3.5 sin(5 x_k + 1), xtanh, analyzed at epoch 100.

[experiment]
name = fig2b
figure = 2(b)
caption = n=80, d=5, m=50, d_out=1, var=0.005^2, lr=1e-3, activation xtanh, epoch 100
seed = 1
out_dir = runs/fig2b

[data]
source = synthetic
target = sine_sum
dim = 5
n = 80
amplitude = 3.5
frequency = 5
phase = 1
lo = -4
hi = 2

[network]
hidden = 50
activations = xtanh
init_std = 0.005

[optimizer]
kind = adam
lr = 1e-3

[run]
max_epochs = 100
snapshot_epochs = 20, 40, 60, 80, 100

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case1
)cfg"},
    {"fig2c", R"cfg(# Two-layer 5-50-1 network on sum_k 3.5 sin(5 x_k + 1), x2tanh, analyzed at epoch 100.

[experiment]
name = fig2c
figure = 2(c)
caption = n=80, d=5, m=50, d_out=1, var=0.005^2, lr=1e-3, activation x2tanh, epoch 100
seed = 1
out_dir = runs/fig2c

[data]
source = synthetic
target = sine_sum
dim = 5
n = 80
amplitude = 3.5
frequency = 5
phase = 1
lo = -4
hi = 2

[network]
hidden = 50
activations = x2tanh
init_std = 0.005

[optimizer]
kind = adam
lr = 1e-3

[run]
max_epochs = 100
snapshot_epochs = 20, 40, 60, 80, 100

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case1
)cfg"},
    {"fig2d", R"cfg(# Two-layer 5-50-1 network on sum_k 3.5 sin(5 x_k + 1), relu, analyzed at epoch 100.

[experiment]
name = fig2d
figure = 2(d)
caption = n=80, d=5, m=50, d_out=1, var=0.005^2, lr=1e-3, activation relu, epoch 100
seed = 1
out_dir = runs/fig2d

[data]
source = synthetic
target = sine_sum
dim = 5
n = 80
amplitude = 3.5
frequency = 5
phase = 1
lo = -4
hi = 2

[network]
hidden = 50
activations = relu
init_std = 0.005

[optimizer]
kind = adam
lr = 1e-3

[run]
max_epochs = 100
snapshot_epochs = 20, 40, 60, 80, 100

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case1
)cfg"},
    {"fig2e", R"cfg(# Two-layer 5-50-1 network on sum_k 3.5 sin(5 x_k + 1), sigmoid, analyzed at epoch 100.

[experiment]
name = fig2e
figure = 2(e)
caption = n=80, d=5, m=50, d_out=1, var=0.005^2, lr=8e-4, activation sigmoid, epoch 100
seed = 1
out_dir = runs/fig2e

[data]
source = synthetic
target = sine_sum
dim = 5
n = 80
amplitude = 3.5
frequency = 5
phase = 1
lo = -4
hi = 2

[network]
hidden = 50
activations = sigmoid
init_std = 0.005

[optimizer]
kind = adam
lr = 8e-4

[run]
max_epochs = 100
snapshot_epochs = 20, 40, 60, 80, 100

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case1
)cfg"},
    {"fig2f", R"cfg(# Two-layer 5-50-1 network on sum_k 3.5 sin(5 x_k + 1), softplus, analyzed at epoch 100.

[experiment]
name = fig2f
figure = 2(f)
caption = n=80, d=5, m=50, d_out=1, var=0.005^2, lr=2.5e-4, activation softplus, epoch 100
seed = 1
out_dir = runs/fig2f

[data]
source = synthetic
target = sine_sum
dim = 5
n = 80
amplitude = 3.5
frequency = 5
phase = 1
lo = -4
hi = 2

[network]
hidden = 50
activations = softplus
init_std = 0.005

[optimizer]
kind = adam
lr = 2.5e-4

[run]
max_epochs = 100
snapshot_epochs = 20, 40, 60, 80, 100

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case1
)cfg"},
    {"fig3", R"cfg(# Six-layer residual network, one activation per hidden layer, on sum_k 4 sin(12 x_k + 1).

[experiment]
name = fig3
figure = 3
caption = n=80, d=3, m=18, d_out=1, var=0.01^2, lr=4e-5, layers x2tanh/xtanh/sigmoid/tanh/softplus, epochs 1000/900/900/1400/1400
seed = 1
out_dir = runs/fig3

[data]
source = synthetic
target = sine_sum
dim = 3
n = 80
amplitude = 4
frequency = 12
phase = 1
lo = -4
hi = 2

[network]
hidden = 18, 18, 18, 18, 18
activations = x2tanh, xtanh, sigmoid, tanh, softplus
residual = true
init_std = 0.01

[optimizer]
kind = adam
lr = 4e-5

[run]
max_epochs = 1400
snapshot_epochs = 900, 1000, 1400

[analysis]
layers = 1, 2, 3, 4, 5
min_norm = 0
cos_threshold = 0.95
)cfg"},
    {"fig4a", R"cfg(# Two-layer 5-50-1 x2tanh network on the lower-frequency target sum_k 3.5 sin(2 x_k + 1).

[experiment]
name = fig4a
figure = 4(a)
caption = n=80, d=5, m=50, d_out=1, var=0.005^2, lr=1e-3, activation x2tanh, epoch 100, discard |w| < 0.04
seed = 1
out_dir = runs/fig4a

[data]
source = synthetic
target = sine_sum
dim = 5
n = 80
amplitude = 3.5
frequency = 2
phase = 1
lo = -4
hi = 2

[network]
hidden = 50
activations = x2tanh
init_std = 0.005

[optimizer]
kind = adam
lr = 1e-3

[run]
max_epochs = 100
snapshot_epochs = 20, 40, 60, 80, 100

[analysis]
layers = 1
min_norm = 0.04
cos_threshold = 0.95
)cfg"},
    {"fig4b", R"cfg(# Two-layer 784-30-10 x2tanh network on MNIST. The IDX files are not shipped; point the paths at a local copy.

[experiment]
name = fig4b
figure = 4(b)
caption = n=60000, d=784, m=30, d_out=10, var=0.001^2, lr=5e-5, activation x2tanh, epoch 100
seed = 1
out_dir = runs/fig4b

[data]
source = mnist
images = ../data/train-images-idx3-ubyte
labels = ../data/train-labels-idx1-ubyte

[network]
hidden = 30
activations = x2tanh
init_std = 0.001

[optimizer]
kind = adam
lr = 5e-5

[run]
max_epochs = 100
snapshot_epochs = 100

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
)cfg"},
    {"fig5a", R"cfg(# Two-layer 1-100-1 tanh network on sin(3x) + sin(6x)/2; output inspected at epoch 1000.

[experiment]
name = fig5a
figure = 5(a)
caption = n=40, d=1, m=100, d_out=1, var=0.005^2, lr=5e-4, activation tanh, epoch 1000
seed = 1
out_dir = runs/fig5a

[data]
source = synthetic
target = custom_1d
dim = 1
n = 40
lo = -1
hi = 1.5
sampling = grid

[network]
hidden = 100
activations = tanh
init_std = 0.005

[optimizer]
kind = adam
lr = 5e-4

[run]
max_epochs = 1000
snapshot_epochs = 200, 1000

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case1
)cfg"},
    {"fig5b", R"cfg(# Two-layer 1-100-1 xtanh network on sin(3x) + sin(6x)/2; output inspected at epoch 1000.

[experiment]
name = fig5b
figure = 5(b)
caption = n=40, d=1, m=100, d_out=1, var=0.005^2, lr=5e-4, activation xtanh, epoch 1000
seed = 1
out_dir = runs/fig5b

[data]
source = synthetic
target = custom_1d
dim = 1
n = 40
lo = -1
hi = 1.5
sampling = grid

[network]
hidden = 100
activations = xtanh
init_std = 0.005

[optimizer]
kind = adam
lr = 5e-4

[run]
max_epochs = 1000
snapshot_epochs = 200, 1000

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case2
)cfg"},
    {"fig5c", R"cfg(# Two-layer 1-100-1 x2tanh network on sin(3x) + sin(6x)/2; output inspected at epoch 1000.

[experiment]
name = fig5c
figure = 5(c)
caption = n=40, d=1, m=100, d_out=1, var=0.005^2, lr=5e-4, activation x2tanh, epoch 1000
seed = 1
out_dir = runs/fig5c

[data]
source = synthetic
target = custom_1d
dim = 1
n = 40
lo = -1
hi = 1.5
sampling = grid

[network]
hidden = 100
activations = x2tanh
init_std = 0.005

[optimizer]
kind = adam
lr = 5e-4

[run]
max_epochs = 1000
snapshot_epochs = 200, 1000

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case2
)cfg"},
    {"fig5d", R"cfg(# Two-layer 1-100-1 relu network on sin(3x) + sin(6x)/2; output inspected at epoch 1000.

[experiment]
name = fig5d
figure = 5(d)
caption = n=40, d=1, m=100, d_out=1, var=0.005^2, lr=5e-4, activation relu, epoch 1000
seed = 1
out_dir = runs/fig5d

[data]
source = synthetic
target = custom_1d
dim = 1
n = 40
lo = -1
hi = 1.5
sampling = grid

[network]
hidden = 100
activations = relu
init_std = 0.005

[optimizer]
kind = adam
lr = 5e-4

[run]
max_epochs = 1000
snapshot_epochs = 200, 1000

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = sweep
)cfg"},
    {"fig6a", R"cfg(# Direction field of the 1-100-1 tanh network on sin(3x) + sin(6x)/2 at epoch 200.

[experiment]
name = fig6a
figure = 6(a)
caption = settings of 5(a): n=40, d=1, m=100, var=0.005^2, lr=5e-4, activation tanh, field at epoch 200
seed = 1
out_dir = runs/fig6a

[data]
source = synthetic
target = custom_1d
dim = 1
n = 40
lo = -1
hi = 1.5
sampling = grid

[network]
hidden = 100
activations = tanh
init_std = 0.005

[optimizer]
kind = adam
lr = 5e-4

[run]
max_epochs = 200
snapshot_epochs = 200

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case1

[field]
layer = 1
lo = -0.2
hi = 0.2
resolution = 21
)cfg"},
    {"fig6b", R"cfg(# Direction field of the 1-100-1 xtanh network on sin(3x) + sin(6x)/2 at epoch 200.

[experiment]
name = fig6b
figure = 6(b)
caption = settings of 5(b): n=40, d=1, m=100, var=0.005^2, lr=5e-4, activation xtanh, field at epoch 200
seed = 1
out_dir = runs/fig6b

[data]
source = synthetic
target = custom_1d
dim = 1
n = 40
lo = -1
hi = 1.5
sampling = grid

[network]
hidden = 100
activations = xtanh
init_std = 0.005

[optimizer]
kind = adam
lr = 5e-4

[run]
max_epochs = 200
snapshot_epochs = 200

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case2

[field]
layer = 1
lo = -0.2
hi = 0.2
resolution = 21
)cfg"},
    {"fig6c", R"cfg(# Direction field of the 1-100-1 x2tanh network on sin(3x) + sin(6x)/2 at epoch 200.

[experiment]
name = fig6c
figure = 6(c)
caption = settings of 5(c): n=40, d=1, m=100, var=0.005^2, lr=5e-4, activation x2tanh, field at epoch 200
seed = 1
out_dir = runs/fig6c

[data]
source = synthetic
target = custom_1d
dim = 1
n = 40
lo = -1
hi = 1.5
sampling = grid

[network]
hidden = 100
activations = x2tanh
init_std = 0.005

[optimizer]
kind = adam
lr = 5e-4

[run]
max_epochs = 200
snapshot_epochs = 200

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = case2

[field]
layer = 1
lo = -0.2
hi = 0.2
resolution = 21
)cfg"},
    {"fig6d", R"cfg(# Direction field of the 1-100-1 relu network on sin(3x) + sin(6x)/2 at epoch 200.

[experiment]
name = fig6d
figure = 6(d)
caption = settings of 5(d): n=40, d=1, m=100, var=0.005^2, lr=5e-4, activation relu, field at epoch 200
seed = 1
out_dir = runs/fig6d

[data]
source = synthetic
target = custom_1d
dim = 1
n = 40
lo = -1
hi = 1.5
sampling = grid

[network]
hidden = 100
activations = relu
init_std = 0.005

[optimizer]
kind = adam
lr = 5e-4

[run]
max_epochs = 200
snapshot_epochs = 200

[analysis]
layers = 1
min_norm = 0
cos_threshold = 0.95
method = sweep

[field]
layer = 1
lo = -0.2
hi = 0.2
resolution = 21
)cfg"},
}};

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : kPresets) out.emplace_back(name);
    return out;
}

std::optional<std::string_view> preset_text(std::string_view name) {
    for (const auto& [key, text] : kPresets) {
        if (key == name) return text;
    }
    return std::nullopt;
}

}  // namespace condense
