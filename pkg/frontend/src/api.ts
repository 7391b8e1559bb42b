import { z } from "zod";

export const MethodInfo = z.object({
  name: z.string(),
  adaptive: z.boolean(),
  alpha_min: z.number(),
  alpha_max: z.number(),
});

export const UploadResponse = z.object({ id: z.string(), m: z.number().int() });

export const EnvelopeResponse = z.object({
  method: z.string(),
  alpha: z.number(),
  k: z.array(z.number().int()),
  p_k: z.array(z.number()),
  vhat: z.array(z.number().int()),
  dhat: z.array(z.number().int()),
  m0_hat: z.number().int().optional(),
});

export const M0Response = z.object({
  method: z.string(),
  alpha: z.number(),
  m0_hat: z.number().int().nullable(),
});

export const BoundResponse = z.object({
  vhat: z.number().int(),
  dhat: z.number().int(),
  fdp_bound: z.number(),
});

export type MethodInfo = z.infer<typeof MethodInfo>;
export type UploadResponse = z.infer<typeof UploadResponse>;
export type EnvelopeResponse = z.infer<typeof EnvelopeResponse>;
export type M0Response = z.infer<typeof M0Response>;
export type BoundResponse = z.infer<typeof BoundResponse>;

/** Parsed payload plus the exact bytes the server sent. */
export interface WithRaw<T> {
  data: T;
  raw: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly field?: string,
  ) {
    super(message);
  }
}

async function request<T>(
  url: string,
  schema: z.ZodType<T>,
  init?: RequestInit,
): Promise<WithRaw<T>> {
  const response = await fetch(url, init);
  const raw = await response.text();
  if (!response.ok) {
    let message = response.statusText;
    let field: string | undefined;
    try {
      const detail = JSON.parse(raw).detail;
      if (detail && typeof detail.message === "string") {
        message = detail.message;
        field = detail.field;
      }
    } catch {
      /* non-JSON error body; keep statusText */
    }
    throw new ApiError(response.status, message, field);
  }
  return { data: schema.parse(JSON.parse(raw)), raw };
}

export class Client {
  constructor(readonly baseUrl: string = "") {}

  async uploadDataset(body: unknown): Promise<WithRaw<UploadResponse>> {
    return request(`${this.baseUrl}/datasets`, UploadResponse, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async listMethods(): Promise<MethodInfo[]> {
    const { data } = await request(
      `${this.baseUrl}/methods`,
      z.array(MethodInfo),
    );
    return data;
  }

  async envelope(
    id: string,
    method: string,
    alpha: number,
  ): Promise<WithRaw<EnvelopeResponse>> {
    const params = new URLSearchParams({ method, alpha: String(alpha) });
    return request(
      `${this.baseUrl}/datasets/${id}/envelope?${params}`,
      EnvelopeResponse,
    );
  }

  async m0(
    id: string,
    method: string,
    alpha: number,
  ): Promise<WithRaw<M0Response>> {
    const params = new URLSearchParams({ method, alpha: String(alpha) });
    return request(`${this.baseUrl}/datasets/${id}/m0?${params}`, M0Response);
  }

  async bound(
    id: string,
    selection: number[],
    method: string,
    alpha: number,
  ): Promise<WithRaw<BoundResponse>> {
    return request(`${this.baseUrl}/datasets/${id}/bound`, BoundResponse, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ selection, method, alpha }),
    });
  }
}
