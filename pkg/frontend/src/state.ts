import type { BoundResponse, WithRaw } from "./api.js";
import { ApiError } from "./api.js";

/** The one endpoint the store needs; `Client` satisfies it. */
export interface BoundClient {
  bound(
    id: string,
    selection: number[],
    method: string,
    alpha: number,
  ): Promise<WithRaw<BoundResponse>>;
}

export interface SelectionState {
  datasetId: string;
  method: string;
  alpha: number;
  selection: Set<number>;
  gamma: number;
}

export interface StoreOptions {
  debounceMs?: number;
  onBound?: (result: WithRaw<BoundResponse>) => void;
  onError?: (message: string) => void;
}

/**
 * Single-writer UI state. Selection edits are debounced; each request
 * carries the version current at dispatch time, and responses arriving
 * after a newer edit are dropped.
 */
export class SelectionStore {
  readonly state: SelectionState;
  private readonly debounceMs: number;
  private readonly onBound?: (result: WithRaw<BoundResponse>) => void;
  private readonly onError?: (message: string) => void;
  private version = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  latest: WithRaw<BoundResponse> | null = null;

  constructor(
    private readonly client: BoundClient,
    datasetId: string,
    method: string,
    alpha: number,
    options: StoreOptions = {},
  ) {
    this.state = {
      datasetId,
      method,
      alpha,
      selection: new Set(),
      gamma: 0.1,
    };
    this.debounceMs = options.debounceMs ?? 150;
    this.onBound = options.onBound;
    this.onError = options.onError;
  }

  toggleRow(index: number): void {
    if (this.state.selection.has(index)) {
      this.state.selection.delete(index);
    } else {
      this.state.selection.add(index);
    }
    this.schedule();
  }

  setSelection(indices: Iterable<number>): void {
    this.state.selection = new Set(indices);
    this.schedule();
  }

  setMethod(method: string): void {
    this.state.method = method;
    this.schedule();
  }

  setAlpha(alpha: number): void {
    this.state.alpha = alpha;
    this.schedule();
  }

  setGamma(gamma: number): void {
    // local display change only; does not touch the bound query
    this.state.gamma = gamma;
  }

  private schedule(): void {
    this.version += 1;
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.flush();
    }, this.debounceMs);
  }

  /** Issue the bound query for the current state immediately. */
  async flush(): Promise<void> {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    const requested = this.version;
    const selection = [...this.state.selection].sort((a, b) => a - b);
    try {
      const result = await this.client.bound(
        this.state.datasetId,
        selection,
        this.state.method,
        this.state.alpha,
      );
      if (requested !== this.version) {
        return; // superseded while in flight
      }
      this.latest = result;
      this.onBound?.(result);
    } catch (err) {
      if (requested !== this.version) {
        return;
      }
      const message = err instanceof ApiError ? err.message : String(err);
      this.onError?.(message);
    }
  }
}
