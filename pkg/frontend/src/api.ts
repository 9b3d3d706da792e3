import type {
  ApiErrorBody,
  Component,
  DesignResponse,
  ForwardResult,
  IngredientInfo,
  RecipeInfo,
  Scenario,
} from './types';

/** Structured error surfaced from the service's {error: {...}} schema. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly field?: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  try {
    const body = (await response.json()) as ApiErrorBody;
    return new ApiError(
      response.status,
      body.error.code,
      body.error.message,
      body.error.field,
    );
  } catch {
    return new ApiError(response.status, 'http_error', response.statusText);
  }
}

export interface ApiClientOptions {
  baseUrl?: string;
  fetchFn?: typeof fetch;
  pollIntervalMs?: number;
}

/**
 * Thin typed client over the service endpoints. All taste numbers the UI
 * shows come through here; nothing is recomputed locally.
 */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: typeof fetch;
  private readonly pollIntervalMs: number;

  constructor(options: ApiClientOptions = {}) {
    this.baseUrl = (options.baseUrl ?? '').replace(/\/$/, '');
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
    this.pollIntervalMs = options.pollIntervalMs ?? 500;
  }

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path);
    if (!response.ok) throw await parseError(response);
    return response.json() as Promise<T>;
  }

  private async post(path: string, body: unknown, signal?: AbortSignal) {
    return this.fetchFn(this.baseUrl + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
      signal,
    });
  }

  ingredients(): Promise<IngredientInfo[]> {
    return this.get('/api/ingredients');
  }

  recipes(): Promise<RecipeInfo[]> {
    return this.get('/api/recipes');
  }

  async predict(
    components: Component[],
    signal?: AbortSignal,
  ): Promise<ForwardResult> {
    const response = await this.post('/api/predict', { components }, signal);
    if (!response.ok) throw await parseError(response);
    return response.json() as Promise<ForwardResult>;
  }

  /** Run a design scenario; transparently polls when the service answers 202. */
  async design(scenario: Scenario, signal?: AbortSignal): Promise<DesignResponse> {
    const response = await this.post('/api/design', scenario, signal);
    if (response.status === 202) {
      const { job_id } = (await response.json()) as { job_id: string };
      return this.pollDesign(job_id, signal);
    }
    if (!response.ok) throw await parseError(response);
    return response.json() as Promise<DesignResponse>;
  }

  private async pollDesign(
    jobId: string,
    signal?: AbortSignal,
  ): Promise<DesignResponse> {
    for (;;) {
      if (signal?.aborted) throw new ApiError(0, 'aborted', 'design run cancelled');
      const job = await this.get<{ status: string; result: unknown }>(
        `/api/design/${jobId}`,
      );
      if (job.status === 'done') return job.result as DesignResponse;
      if (job.status === 'error') {
        const body = job.result as ApiErrorBody;
        throw new ApiError(422, body.error.code, body.error.message, body.error.field);
      }
      await new Promise((resolve) => setTimeout(resolve, this.pollIntervalMs));
    }
  }
}
