"""Chain, Context and middleware behaviour used by the experiment pipelines."""

import asyncio

import pytest

from dafermos_dg.chain import Chain
from dafermos_dg.config import parse_config
from dafermos_dg.context import Context, ImmutableContext
from dafermos_dg.errors import BlowUpError
from dafermos_dg.experiments import build_chain, is_blowup, record_blowup
from dafermos_dg.link import is_link, link_name
from dafermos_dg.middleware import Logging, Timing, is_middleware


def sample_link(ctx: Context) -> Context:
    """Sample link docstring."""
    ctx["sample"] = True
    return ctx


async def another_link(ctx: Context) -> Context:
    """Another link docstring."""
    ctx["another"] = True
    return ctx


# 1. Docstrings and inspection
def test_chain_dynamic_docstring():
    chain = Chain(sample_link, another_link)
    assert "sample_link" in chain.__doc__
    assert "Sample link docstring." in chain.__doc__

    def third_link(ctx: Context) -> Context:
        """Third link docstring."""
        return ctx

    chain.add_link(third_link)
    assert "Third link docstring." in chain.__doc__
    chain.use(Timing())
    assert "Timing" in chain.__doc__


def test_inspect_describes_the_structure():
    chain = Chain(sample_link, another_link, name="demo")
    chain.connect(sample_link, another_link, is_blowup)
    chain.use(Logging())
    info = chain.inspect()
    assert info["name"] == "demo"
    assert info["links"] == ["sample_link", "another_link"]
    assert info["connections"] == [{"source": "sample_link", "target": "another_link", "condition": "is_blowup"}]
    assert info["middleware"] == ["Logging"]


@pytest.mark.parametrize("experiment", ["run", "converge", "entropy", "dafermos", "blowup"])
def test_experiment_chains(experiment):
    info = build_chain(experiment).inspect()
    assert info["links"][0] == "prepare"
    assert info["links"][-1] == "write_csv"
    assert info["connections"][0]["target"] == "record_blowup"
    assert info["middleware"] == ["Logging", "Timing"]


def test_protocols():
    assert is_link(another_link)
    assert not is_link(lambda ctx: ctx)
    assert is_middleware(Timing()) and is_middleware(Logging())
    assert link_name(sample_link) == "sample_link"


@pytest.mark.asyncio
async def test_experiment_chain_runs_end_to_end(tmp_path):
    out = tmp_path / "run.csv"
    config = parse_config("run", {"scheme": "godunov", "n": 8, "t_end": 0.1, "outputs": 2, "out": out})
    result = await build_chain(config.experiment).run(Context(config=config))
    assert "exception" not in result
    assert result["status"] == "completed"
    assert result["header"] == ["time", "x", "u"]
    assert result["rows"] and len(result["rows"]) % 8 == 0
    assert out.read_text().splitlines()[2] == "time,x,u"


# 2. Running
def test_empty_chain_returns_its_input():
    result = asyncio.run(Chain().run({"foo": "bar"}))
    assert result == {"foo": "bar"}
    assert isinstance(result, Context)


def test_sync_and_async_links():
    result = asyncio.run(Chain(sample_link, another_link).run(Context()))
    assert result["sample"] and result["another"]


def test_unrouted_exception_stops_the_chain():
    async def fail(ctx):
        raise ValueError("fail")

    result = asyncio.run(Chain(fail, sample_link).run({}))
    assert isinstance(result["exception"], ValueError)
    assert "sample" not in result


def test_routed_exception_continues_after_the_source():
    async def fail(ctx):
        raise RuntimeError("fail")

    async def handle(ctx):
        ctx["handled"] = type(ctx.pop("exception")).__name__
        return ctx

    chain = Chain(fail, sample_link)
    chain.connect(fail, handle, lambda ctx: "exception" in ctx)
    result = asyncio.run(chain.run({}))
    assert result["handled"] == "RuntimeError"
    assert result["sample"] is True
    assert "exception" not in result


def test_blow_up_routing_keeps_the_partial_result():
    async def explode(ctx):
        raise BlowUpError(0.25, partial="partial data")

    chain = Chain(explode, sample_link)
    chain.connect(explode, record_blowup, is_blowup)
    result = asyncio.run(chain.run({}))
    assert result["status"] == "blow-up t=0.25"
    assert result["blowup_time"] == 0.25
    assert result["partial"] == "partial data"
    assert result["sample"] is True


def test_condition_that_does_not_match_leaves_the_exception():
    async def fail(ctx):
        raise ValueError("not a blow-up")

    chain = Chain(fail, sample_link)
    chain.connect(fail, record_blowup, is_blowup)
    result = asyncio.run(chain.run({}))
    assert isinstance(result["exception"], ValueError)


# 3. Middleware
def test_middleware_order_and_read_only_view():
    calls = []

    class Recorder:
        async def before(self, link, ctx, mwctx):
            calls.append(("before", link_name(link), self.position))
            with pytest.raises(TypeError):
                ctx["injected"] = 1

        async def after(self, link, ctx, result, mwctx):
            calls.append(("after", link_name(link), self.position))

    chain = Chain(sample_link)
    chain.use(Recorder())
    result = asyncio.run(chain.run({}))
    assert calls == [("before", "sample_link", "chain-before"), ("after", "sample_link", "chain-after")]
    assert "injected" not in result


def test_link_level_middleware():
    calls = []

    class Recorder:
        async def before(self, link, ctx, mwctx):
            calls.append(self.position)

        async def after(self, link, ctx, result, mwctx):
            calls.append(self.position)

    async def step(ctx):
        """Step."""
        return ctx

    chain = Chain(step)
    recorder = Recorder()
    chain.use(recorder, on_link=step, position="before")
    chain.use(recorder, on_link=step, position="after")
    asyncio.run(chain.run({}))
    assert calls == ["link-before", "link-after"]
    with pytest.raises(ValueError):
        chain.use(Recorder(), on_link=step, position="around")


def test_timing_stays_out_of_the_pipeline_context():
    captured = {}

    class Peek:
        async def before(self, link, ctx, mwctx):
            pass

        async def after(self, link, ctx, result, mwctx):
            captured.update(mwctx.get("timings", {}))

    chain = Chain(sample_link, another_link)
    chain.use(Timing())
    chain.use(Peek())
    result = asyncio.run(chain.run({}))
    assert set(captured) == {"sample_link", "another_link"}
    assert "timings" not in result


# 4. Context
def test_immutable_context():
    ctx = Context(a=1)
    view = ctx.asImmutable()
    assert isinstance(view, ImmutableContext) and view.isImmutable()
    for mutate in (lambda: view.__setitem__("b", 2), lambda: view.pop("a"), lambda: view.update(b=2), view.clear):
        with pytest.raises(TypeError):
            mutate()
    writable = view.asMutable()
    writable["b"] = 2
    assert writable == {"a": 1, "b": 2} and view == {"a": 1}
