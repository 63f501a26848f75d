/* tslint:disable */
/* eslint-disable */

export class Simulation {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Takes `steps` time steps; returns the new time.
     */
    advance(steps: number): number;
    dt(): number;
    energy(): number;
    /**
     * Max-norm distance to the exact solution, or NaN when the scenario
     * has none.
     */
    exact_error(): number;
    /**
     * `sin(u/2)` row by row (`y` fixed, `x` varying), bottom row first.
     */
    half_sine(): Float64Array;
    /**
     * `dx` or `dt` that are not positive fall back to the scenario
     * defaults.
     */
    constructor(name: string, dx: number, dt: number);
    nx(): number;
    ny(): number;
    ring_radius(): number;
    time(): number;
}

/**
 * Max error of the first-derivative weights applied to `sin(k x)` on `n`
 * nodes over `[-7, 7]`, split as `[all nodes, nodes at least 8 from the
 * boundary]` (the second entry is NaN when the grid is too small).
 */
export function derivative_error(n: number, k: number): Float64Array;

export function describe(name: string): string;

/**
 * Names of the built-in scenarios, newline separated.
 */
export function scenario_names(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly derivative_error: (a: number, b: number) => [number, number, number, number];
    readonly describe: (a: number, b: number) => [number, number, number, number];
    readonly scenario_names: () => [number, number];
    readonly simulation_advance: (a: number, b: number) => [number, number, number];
    readonly simulation_dt: (a: number) => number;
    readonly simulation_energy: (a: number) => [number, number, number];
    readonly simulation_exact_error: (a: number) => [number, number, number];
    readonly simulation_half_sine: (a: number) => [number, number];
    readonly simulation_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly simulation_nx: (a: number) => number;
    readonly simulation_ny: (a: number) => number;
    readonly simulation_ring_radius: (a: number) => [number, number, number];
    readonly simulation_time: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
